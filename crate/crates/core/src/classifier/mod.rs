//! Classification of `f_{m,n}` into the completely monotonic cases and the
//! sign-changing, non-monotonic case.
//!
//! Odd `n` gives a sum of two completely monotonic functions. Among even `n`
//! only `f_{1,2}` stays completely monotonic; every other even case changes
//! sign and is not monotonic. Each verdict here is backed by numeric
//! evidence: a [`CmReport`] or a pair of certified [`Witness`]es.

pub mod asymptotics;
pub mod bounds;
pub mod poly;
pub mod witness;

use serde::{Deserialize, Serialize};

use crate::cm_engine::{cm_check, CmReport, CmVerdict, FamilyIndex, DEFAULT_MAX_ORDER};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::GridSpec;
use crate::polygamma::PrecisionConfig;

pub use poly::IntPolynomial;
pub use witness::{find_nonmonotonic, find_sign_change, SearchConfig, Witness, WitnessKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CmTrivial,
    CmNontrivial,
    SignChangingNonmonotonic,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CmTrivial => "CM_trivial",
            Verdict::CmNontrivial => "CM_nontrivial",
            Verdict::SignChangingNonmonotonic => "sign_changing_nonmonotonic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Evidence {
    Cm(CmReport),
    Witnesses {
        sign_change: Witness,
        non_monotonic: Witness,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub index: FamilyIndex,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub max_order: u32,
    pub grid: GridSpec,
    pub search: SearchConfig,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_order: DEFAULT_MAX_ORDER,
            grid: GridSpec::standard(),
            search: SearchConfig::default(),
        }
    }
}

/// The verdict predicted by index parity alone.
pub fn closed_form_verdict(m: u32, n: u32) -> Result<Verdict> {
    FamilyIndex::new(m, n)?;
    Ok(if n % 2 == 1 {
        Verdict::CmTrivial
    } else if (m, n) == (1, 2) {
        Verdict::CmNontrivial
    } else {
        Verdict::SignChangingNonmonotonic
    })
}

fn cm_evidence(
    idx: FamilyIndex,
    opts: &ClassifyOptions,
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Result<CmReport> {
    let grid = opts.grid.points()?;
    let report = cm_check(idx, opts.max_order, &grid, cfg, exec)?;
    if report.verdict != CmVerdict::ConsistentWithCm {
        return Err(Error::Unclassified {
            m: idx.m,
            n: idx.n,
            reason: format!(
                "CM check gave {} violations and {} inconclusive entries",
                report.violations, report.inconclusive
            ),
        });
    }
    Ok(report)
}

/// Classifies `f_{m,n}` (full second index `n`).
///
/// Odd `n` is confirmed by a CM check. For even `n` a witness search runs
/// first; when no sign change exists in the search window the pair must
/// pass the CM check instead.
pub fn classify(
    m: u32,
    n: u32,
    opts: &ClassifyOptions,
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Result<ClassificationEntry> {
    let index = FamilyIndex::new(m, n)?;
    if n % 2 == 1 {
        let report = cm_evidence(index, opts, cfg, exec)?;
        return Ok(ClassificationEntry {
            index,
            verdict: Verdict::CmTrivial,
            evidence: Evidence::Cm(report),
        });
    }
    if (m, n) == (1, 2) {
        let report = cm_evidence(index, opts, cfg, exec)?;
        return Ok(ClassificationEntry {
            index,
            verdict: Verdict::CmNontrivial,
            evidence: Evidence::Cm(report),
        });
    }
    let sign_change = find_sign_change(m, n, &opts.search, cfg)?;
    let non_monotonic = find_nonmonotonic(m, n, &opts.search, cfg)?;
    Ok(ClassificationEntry {
        index,
        verdict: Verdict::SignChangingNonmonotonic,
        evidence: Evidence::Witnesses {
            sign_change,
            non_monotonic,
        },
    })
}

/// Classifies every pair `1 ≤ m ≤ m_max`, `1 ≤ n ≤ n_max`, ordered by `m`
/// then `n`.
pub fn classify_all(
    m_max: u32,
    n_max: u32,
    opts: &ClassifyOptions,
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Vec<(FamilyIndex, Result<ClassificationEntry>)> {
    let pairs: Vec<FamilyIndex> = (1..=m_max)
        .flat_map(|m| (1..=n_max).map(move |n| FamilyIndex { m, n }))
        .collect();
    let results = exec.map(&pairs, |idx| classify(idx.m, idx.n, opts, cfg, Execution::Sequential));
    pairs.into_iter().zip(results).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_rule() {
        assert_eq!(closed_form_verdict(1, 2).unwrap(), Verdict::CmNontrivial);
        assert_eq!(closed_form_verdict(4, 7).unwrap(), Verdict::CmTrivial);
        assert_eq!(
            closed_form_verdict(1, 4).unwrap(),
            Verdict::SignChangingNonmonotonic
        );
        assert!(closed_form_verdict(0, 1).is_err());
    }

    #[test]
    fn verdict_names() {
        assert_eq!(Verdict::CmNontrivial.to_string(), "CM_nontrivial");
    }
}
