use polycm::classifier::bounds::{bound_check, BoundKind, BoundStatus};
use polycm::classifier::{classify_all, closed_form_verdict, ClassifyOptions, Evidence, WitnessKind};
use polycm::cm_engine::{cm_check, CmVerdict, FamilyIndex};
use polycm::inequalities::bounds_suite;
use polycm::kernels::{kernel_report, Endpoint, KernelId, Limit};

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_OK, EXIT_VERIFICATION};
use crate::report::{Cell, Entry, Finding, Report};

/// A finished run: the report and the process exit status it implies.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn new(cfg: &RunConfig, entries: Vec<Entry>, findings: Vec<Finding>, ok: bool) -> Self {
        Outcome {
            report: Report {
                config: cfg.clone(),
                entries,
                findings,
            },
            exit_code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
        }
    }
}

fn grid(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    Ok(cfg.grid.points()?)
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pcfg = cfg.precision_config();
    let opts = ClassifyOptions {
        max_order: cfg.max_order,
        grid: cfg.grid,
        ..ClassifyOptions::default()
    };
    let results = classify_all(cfg.m_max, cfg.n_max, &opts, &pcfg, cfg.execution);
    let mut entries = Vec::with_capacity(results.len());
    let mut findings = Vec::new();
    let mut ok = true;
    for (idx, res) in results {
        let expected = closed_form_verdict(idx.m, idx.n)?;
        let mut e = Entry::new().with("m", idx.m).with("n", idx.n);
        match res {
            Ok(c) => {
                let matches = c.verdict == expected;
                if !matches {
                    ok = false;
                    findings.push(Finding::new(
                        "mismatch",
                        idx.to_string(),
                        format!("numeric verdict {} but parity rule gives {expected}", c.verdict),
                    ));
                }
                e = e
                    .with("verdict", c.verdict.to_string())
                    .with("expected", expected.to_string())
                    .with("matches", matches);
                e = match &c.evidence {
                    Evidence::Cm(r) => e
                        .with("evidence", "cm_report")
                        .with("cm_max_order", r.max_order)
                        .with("cm_points", r.entries.len())
                        .with("cm_violations", r.violations)
                        .with("cm_inconclusive", r.inconclusive)
                        .with("cm_min_ratio", r.min_relative_margin())
                        .with("x_pos", Cell::Empty)
                        .with("f_pos", Cell::Empty)
                        .with("x_neg", Cell::Empty)
                        .with("f_neg", Cell::Empty)
                        .with("x_up", Cell::Empty)
                        .with("df_up", Cell::Empty)
                        .with("x_down", Cell::Empty)
                        .with("df_down", Cell::Empty)
                        .with("witness_margin", Cell::Empty),
                    Evidence::Witnesses {
                        sign_change,
                        non_monotonic,
                    } => {
                        let (xp, xn) = match sign_change.kind {
                            WitnessKind::SignChange { x_pos, x_neg } => (x_pos, x_neg),
                            WitnessKind::NonMonotonic { .. } => unreachable!("sign-change witness"),
                        };
                        let (xu, xd) = match non_monotonic.kind {
                            WitnessKind::NonMonotonic { x_up, x_down } => (x_up, x_down),
                            WitnessKind::SignChange { .. } => unreachable!("monotonicity witness"),
                        };
                        e.with("evidence", "witnesses")
                            .with("cm_max_order", Cell::Empty)
                            .with("cm_points", Cell::Empty)
                            .with("cm_violations", Cell::Empty)
                            .with("cm_inconclusive", Cell::Empty)
                            .with("cm_min_ratio", Cell::Empty)
                            .with("x_pos", xp)
                            .with("f_pos", sign_change.positive.value)
                            .with("x_neg", xn)
                            .with("f_neg", sign_change.negative.value)
                            .with("x_up", xu)
                            .with("df_up", non_monotonic.positive.value)
                            .with("x_down", xd)
                            .with("df_down", non_monotonic.negative.value)
                            .with("witness_margin", sign_change.margin().min(non_monotonic.margin()))
                    }
                };
            }
            Err(err) => {
                ok = false;
                findings.push(Finding::new("classification_error", idx.to_string(), err.to_string()));
                e = e
                    .with("verdict", "error")
                    .with("expected", expected.to_string())
                    .with("matches", false);
            }
        }
        entries.push(e);
    }
    Ok(Outcome::new(cfg, entries, findings, ok))
}

pub fn cmd_check_cm(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let idx = cfg.index.unwrap_or(FamilyIndex { m: 1, n: 2 });
    let report = cm_check(idx, cfg.max_order, &grid(cfg)?, &cfg.precision_config(), cfg.execution)?;
    let entries = report
        .entries
        .iter()
        .map(|e| {
            Entry::new()
                .with("order", e.order)
                .with("x", e.x)
                .with("value", e.value)
                .with("status", format!("{:?}", e.status).to_lowercase())
        })
        .collect();
    let ok = report.verdict == CmVerdict::ConsistentWithCm;
    let detail = match &report.verdict {
        CmVerdict::ConsistentWithCm => format!(
            "consistent with complete monotonicity; {} of {} entries inconclusive",
            report.inconclusive,
            report.entries.len()
        ),
        CmVerdict::Violation { order, x, value, margin } => {
            format!("order {order} at x = {x:?}: value {value:?}, margin {margin:?}")
        }
        CmVerdict::Inconclusive { points } => {
            format!("{} inconclusive entries exceed the tolerated fraction", points.len())
        }
    };
    let kind = if ok { "verdict" } else { "violation" };
    Ok(Outcome::new(
        cfg,
        entries,
        vec![Finding::new(kind, idx.to_string(), detail)],
        ok,
    ))
}

fn default_kernels() -> Vec<KernelId> {
    let mut v = vec![KernelId::Omega, KernelId::TanhKernel, KernelId::Kappa];
    v.extend((-3..=2).map(KernelId::H));
    v
}

fn limit_text(l: Limit) -> String {
    match l {
        Limit::Finite(v) => format!("{v:?}"),
        Limit::PosInfinity => "inf".into(),
    }
}

pub fn cmd_kernels(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let kernels = cfg.kernel.map_or_else(default_kernels, |k| vec![k]);
    let g = grid(cfg)?;
    let reports = cfg
        .execution
        .map(&kernels, |&k| kernel_report(k, &g))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = Vec::new();
    let mut findings = Vec::new();
    for r in &reports {
        let mut e = Entry::new()
            .with("kernel", r.kernel.to_string())
            .with("expected_monotonicity", format!("{:?}", r.expected_monotonicity).to_lowercase())
            .with("monotonicity", format!("{:?}", r.monotonicity_verdict).to_lowercase())
            .with("unresolved_pairs", r.unresolved_pairs.len());
        for end in [Endpoint::Zero, Endpoint::Infinity] {
            let c = r.limit_checks.iter().find(|c| c.end == end);
            let (lim, ach, pass) = match end {
                Endpoint::Zero => ("limit_zero", "limit_zero_achieved", "limit_zero_passed"),
                Endpoint::Infinity => ("limit_inf", "limit_inf_achieved", "limit_inf_passed"),
            };
            e = e
                .with(lim, c.map(|c| limit_text(c.expected)))
                .with(ach, c.map(|c| c.achieved))
                .with(pass, c.map(|c| c.passed));
        }
        e = e
            .with("range_min_margin", r.range_check.min_margin)
            .with("range_passed", r.range_check.passed)
            .with("passed", r.passed());
        if !r.passed() {
            findings.push(Finding::new(
                "kernel_check_failed",
                r.kernel.to_string(),
                format!(
                    "monotonicity {:?} (expected {:?}), limits passed {:?}, range passed {}",
                    r.monotonicity_verdict,
                    r.expected_monotonicity,
                    r.limit_checks.iter().map(|c| c.passed).collect::<Vec<_>>(),
                    r.range_check.passed
                ),
            ));
        }
        entries.push(e);
    }
    let ok = reports.iter().all(|r| r.passed());
    Ok(Outcome::new(cfg, entries, findings, ok))
}

pub fn cmd_inequalities(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let g = grid(cfg)?;
    let summary = bounds_suite(cfg.max_order, &g, &cfg.precision_config(), cfg.execution)?;
    let entries = summary
        .results
        .iter()
        .map(|r| {
            Entry::new()
                .with("k", r.k)
                .with("x", r.x)
                .with("lower", r.lower)
                .with("middle", r.middle)
                .with("upper", r.upper)
                .with("lower_margin", r.margins.0)
                .with("upper_margin", r.margins.1)
                .with("passed", r.passed())
        })
        .collect();
    let mut findings: Vec<Finding> = summary
        .failures
        .iter()
        .map(|r| {
            Finding::new(
                "inequality_failed",
                format!("k={} x={:?}", r.k, r.x),
                format!("margins {:?} / {:?}", r.margins.0.value, r.margins.1.value),
            )
        })
        .collect();
    // the ψ lower margin is expected to shrink along the grid for x ≥ 1
    let psi_lower: Vec<f64> = summary
        .results
        .iter()
        .filter(|r| r.k == 0 && r.x >= 1.0)
        .map(|r| r.margins.0.value)
        .collect();
    if psi_lower.len() >= 2 {
        let shrinks = psi_lower.windows(2).all(|w| w[1] < w[0]);
        findings.push(Finding::new(
            "note",
            "psi lower margin",
            format!("decreasing along the grid for x >= 1: {shrinks}"),
        ));
    }
    let ok = summary.passed();
    Ok(Outcome::new(cfg, entries, findings, ok))
}

fn kind_name(k: BoundKind) -> &'static str {
    match k {
        BoundKind::LowerPrinted => "lower_printed",
        BoundKind::LowerDerived => "lower_derived",
        BoundKind::UpperPrinted => "upper_printed",
        BoundKind::UpperDerived => "upper_derived",
    }
}

fn status_name(s: BoundStatus) -> &'static str {
    match s {
        BoundStatus::Holds => "holds",
        BoundStatus::Fails => "fails",
        BoundStatus::Inconclusive => "inconclusive",
    }
}

/// Bound audit for `f'_{m,2n}`. `--index m,n` selects one pair in this
/// half-index convention.
pub fn cmd_bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let pairs: Vec<(u32, u32)> = match cfg.index {
        Some(idx) => vec![(idx.m, idx.n)],
        None => (1..=cfg.m_max)
            .flat_map(|m| (1..=cfg.n_max).map(move |n| (m, n)))
            .collect(),
    };
    let g = grid(cfg)?;
    let pcfg = cfg.precision_config();
    let reports = cfg
        .execution
        .map(&pairs, |&(m, n)| bound_check(m, n, &g, &pcfg, polycm::Execution::Sequential))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut entries = Vec::new();
    let mut findings = Vec::new();
    let mut ok = true;
    for r in &reports {
        for p in &r.points {
            let mut e = Entry::new()
                .with("m", r.m)
                .with("n", r.n)
                .with("x", p.x)
                .with("derivative", p.derivative);
            for c in &p.comparisons {
                let name = kind_name(c.kind);
                e = e.with(name, c.bound).with(status_suffix(c.kind), status_name(c.status));
            }
            entries.push(e);
        }
        for kind in BoundKind::ALL {
            let failing: Vec<f64> = r
                .points
                .iter()
                .filter(|p| {
                    p.comparisons
                        .iter()
                        .any(|c| c.kind == kind && c.status != BoundStatus::Holds)
                })
                .map(|p| p.x)
                .collect();
            if failing.is_empty() {
                continue;
            }
            if kind.is_derived() {
                ok = false;
            }
            let label = if kind.is_derived() { "derived_bound_violation" } else { "printed_bound_failure" };
            findings.push(Finding::new(
                label,
                format!("({},{}) {}", r.m, r.n, kind_name(kind)),
                format!(
                    "not certified at {} of {} points, x in [{:?}, {:?}]",
                    failing.len(),
                    r.points.len(),
                    failing[0],
                    failing[failing.len() - 1]
                ),
            ));
        }
    }
    Ok(Outcome::new(cfg, entries, findings, ok))
}

fn status_suffix(k: BoundKind) -> &'static str {
    match k {
        BoundKind::LowerPrinted => "lower_printed_status",
        BoundKind::LowerDerived => "lower_derived_status",
        BoundKind::UpperPrinted => "upper_printed_status",
        BoundKind::UpperDerived => "upper_derived_status",
    }
}
