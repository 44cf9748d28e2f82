//! Polynomial bounds on `f'_{m,2n}(x) = 2ψ⁽ᵐ⁾ψ⁽ᵐ⁺¹⁾ + ψ⁽²ⁿ⁺¹⁾`.
//!
//! From the double inequality
//! `L_k(x) = (k−1)!/x^k + k!/(2x^{k+1}) < |ψ⁽ᵏ⁾(x)| < (k−1)!/x^k + k!/x^{k+1} = U_k(x)`
//! and the signs `ψ⁽ᵐ⁾ψ⁽ᵐ⁺¹⁾ < 0`, `ψ⁽²ⁿ⁺¹⁾ > 0` one gets
//!
//! * `f' ≥ −2 U_m U_{m+1} + L_{2n+1} = q(x) / (2x^E)`
//! * `f' ≤ −2 L_m L_{m+1} + U_{2n+1} = p(x) / (4x^E)`
//!
//! with `E = 2m + 2n + 3`. The `*_printed` polynomials transcribe the
//! published closed forms; the `*_derived` ones are expanded here from the
//! inequality itself. Their negative parts differ by a factor of two.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use crate::cm_engine::{f_derivative, FamilyIndex};
use crate::error::{Error, Result};
use crate::eval::EvalResult;
use crate::exec::Execution;
use crate::kernels::validate_grid;
use crate::polygamma::PrecisionConfig;

pub(crate) fn fact(n: u32) -> BigInt {
    (2..=n).fold(BigInt::from(1u32), |acc, k| acc * k)
}

fn check_mn(m: u32, n: u32) -> Result<()> {
    if m == 0 || n == 0 {
        Err(Error::Domain(format!("need m, n >= 1, got ({m}, {n})")))
    } else {
        Ok(())
    }
}

/// Exponent `E = 2m + 2n + 3` of the common denominator.
pub fn denominator_power(m: u32, n: u32) -> u32 {
    2 * m + 2 * n + 3
}

/// A bound polynomial kept as its positive and negative contributions
/// before like powers are merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPolynomial {
    pub positive: IntPolynomial,
    pub negative: IntPolynomial,
}

impl SplitPolynomial {
    pub fn combined(&self) -> IntPolynomial {
        &self.positive + &self.negative
    }
}

/// Unmerged terms of the published `q_{m,n}`.
pub fn q_printed_parts(m: u32, n: u32) -> Result<SplitPolynomial> {
    check_mn(m, n)?;
    let mf = fact(m);
    let two = BigInt::from(2);
    Ok(SplitPolynomial {
        positive: IntPolynomial::from_terms([
            (&two * fact(2 * n), 2 * m + 2),
            (fact(2 * n + 1), 2 * m + 1),
        ]),
        negative: IntPolynomial::from_terms([
            (-(&two * &mf * fact(m + 1)), 2 * n),
            (-(&two * (&mf * &mf + fact(m - 1) * fact(m + 1))), 2 * n + 1),
            (-(&two * fact(m - 1) * &mf), 2 * n + 2),
        ]),
    })
}

/// Unmerged terms of the published `p_{m,n}`.
pub fn p_printed_parts(m: u32, n: u32) -> Result<SplitPolynomial> {
    check_mn(m, n)?;
    let mf = fact(m);
    let two = BigInt::from(2);
    let four = BigInt::from(4);
    Ok(SplitPolynomial {
        positive: IntPolynomial::from_terms([
            (&four * fact(2 * n), 2 * m + 2),
            (&four * fact(2 * n + 1), 2 * m + 1),
        ]),
        negative: IntPolynomial::from_terms([
            (-(&mf * fact(m + 1)), 2 * n),
            (-(&two * (&mf * &mf + fact(m - 1) * fact(m + 1))), 2 * n + 1),
            (-(&four * fact(m - 1) * &mf), 2 * n + 2),
        ]),
    })
}

/// `q_{m,n}` as published, like powers merged.
pub fn q_printed(m: u32, n: u32) -> Result<IntPolynomial> {
    Ok(q_printed_parts(m, n)?.combined())
}

/// `p_{m,n}` as published, like powers merged.
pub fn p_printed(m: u32, n: u32) -> Result<IntPolynomial> {
    Ok(p_printed_parts(m, n)?.combined())
}

/// Laurent polynomial in `x` with integer coefficients.
#[derive(Debug, Clone, Default)]
struct Laurent(BTreeMap<i32, BigInt>);

impl Laurent {
    fn from_terms(terms: &[(BigInt, i32)]) -> Self {
        let mut l = Laurent::default();
        for (c, p) in terms {
            *l.0.entry(*p).or_default() += c;
        }
        l
    }

    fn mul(&self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (pa, ca) in &self.0 {
            for (pb, cb) in &rhs.0 {
                *out.0.entry(pa + pb).or_default() += ca * cb;
            }
        }
        out
    }

    fn scale(&self, c: i64) -> Laurent {
        Laurent(self.0.iter().map(|(p, v)| (*p, v * c)).collect())
    }

    fn shift(&self, by: i32) -> Laurent {
        Laurent(self.0.iter().map(|(p, v)| (p + by, v.clone())).collect())
    }

    fn into_polynomial(self) -> IntPolynomial {
        let terms: Vec<(BigInt, u32)> = self
            .0
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| {
                let p = u32::try_from(p).expect("bound expansion left a negative power");
                (c, p)
            })
            .collect();
        IntPolynomial::from_terms(terms)
    }
}

/// `2 L_k = 2(k−1)! x^{−k} + k! x^{−k−1}`
fn twice_lower(k: u32) -> Laurent {
    let k_i = k as i32;
    Laurent::from_terms(&[
        (BigInt::from(2) * fact(k - 1), -k_i),
        (fact(k), -k_i - 1),
    ])
}

/// `U_k = (k−1)! x^{−k} + k! x^{−k−1}`
fn upper(k: u32) -> Laurent {
    let k_i = k as i32;
    Laurent::from_terms(&[(fact(k - 1), -k_i), (fact(k), -k_i - 1)])
}

/// Parts of `q = 2x^E (−2 U_m U_{m+1} + L_{2n+1})`, expanded symbolically.
pub fn q_derived_parts(m: u32, n: u32) -> Result<SplitPolynomial> {
    check_mn(m, n)?;
    let e = denominator_power(m, n) as i32;
    let negative = upper(m).mul(&upper(m + 1)).scale(-4).shift(e);
    let positive = twice_lower(2 * n + 1).shift(e);
    Ok(SplitPolynomial {
        positive: positive.into_polynomial(),
        negative: negative.into_polynomial(),
    })
}

/// Parts of `p = 4x^E (−2 L_m L_{m+1} + U_{2n+1})`, expanded symbolically.
pub fn p_derived_parts(m: u32, n: u32) -> Result<SplitPolynomial> {
    check_mn(m, n)?;
    let e = denominator_power(m, n) as i32;
    // 4 · (−2 L_m L_{m+1}) = −2 (2L_m)(2L_{m+1})
    let negative = twice_lower(m).mul(&twice_lower(m + 1)).scale(-2).shift(e);
    let positive = upper(2 * n + 1).scale(4).shift(e);
    Ok(SplitPolynomial {
        positive: positive.into_polynomial(),
        negative: negative.into_polynomial(),
    })
}

/// `q` with `f'_{m,2n} ≥ q/(2x^E)`.
pub fn q_derived(m: u32, n: u32) -> Result<IntPolynomial> {
    Ok(q_derived_parts(m, n)?.combined())
}

/// `p` with `f'_{m,2n} ≤ p/(4x^E)`.
pub fn p_derived(m: u32, n: u32) -> Result<IntPolynomial> {
    Ok(p_derived_parts(m, n)?.combined())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    LowerPrinted,
    LowerDerived,
    UpperPrinted,
    UpperDerived,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [
        BoundKind::LowerPrinted,
        BoundKind::LowerDerived,
        BoundKind::UpperPrinted,
        BoundKind::UpperDerived,
    ];

    pub fn is_lower(self) -> bool {
        matches!(self, BoundKind::LowerPrinted | BoundKind::LowerDerived)
    }

    pub fn is_derived(self) -> bool {
        matches!(self, BoundKind::LowerDerived | BoundKind::UpperDerived)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub kind: BoundKind,
    pub bound: EvalResult,
    /// Signed slack: `f' − bound` for lower bounds, `bound − f'` for upper.
    pub margin: EvalResult,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub x: f64,
    pub derivative: EvalResult,
    pub comparisons: Vec<BoundComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundFinding {
    pub m: u32,
    pub n: u32,
    pub kind: BoundKind,
    pub x: f64,
    pub derivative: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u32,
    pub n: u32,
    pub q_printed: IntPolynomial,
    pub q_derived: IntPolynomial,
    pub p_printed: IntPolynomial,
    pub p_derived: IntPolynomial,
    pub points: Vec<BoundPoint>,
    /// Points where a published bound is violated. Recorded, not fatal.
    pub findings: Vec<BoundFinding>,
}

impl BoundReport {
    fn all_hold(&self, kind: BoundKind) -> bool {
        self.points.iter().all(|p| {
            p.comparisons
                .iter()
                .filter(|c| c.kind == kind)
                .all(|c| c.status == BoundStatus::Holds)
        })
    }

    /// Derived bounds hold with cleared margins at every point.
    pub fn derived_hold(&self) -> bool {
        self.all_hold(BoundKind::LowerDerived) && self.all_hold(BoundKind::UpperDerived)
    }

    pub fn printed_upper_holds(&self) -> bool {
        self.all_hold(BoundKind::UpperPrinted)
    }

    pub fn status_at(&self, x: f64, kind: BoundKind) -> Option<BoundStatus> {
        self.points
            .iter()
            .find(|p| p.x == x)
            .and_then(|p| p.comparisons.iter().find(|c| c.kind == kind))
            .map(|c| c.status)
    }
}

/// Compares `f'_{m,2n}(x)` with all four bound variants at each grid point.
pub fn bound_check(
    m: u32,
    n: u32,
    grid: &[f64],
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Result<BoundReport> {
    check_mn(m, n)?;
    validate_grid(grid)?;
    let polys = [q_printed(m, n)?, q_derived(m, n)?, p_printed(m, n)?, p_derived(m, n)?];
    let e = denominator_power(m, n) as i32;
    let idx = FamilyIndex { m, n: 2 * n };

    let rows = exec.map(grid, |&x| -> Result<BoundPoint> {
        let d = f_derivative(idx, 1, x, cfg)?;
        let mut comparisons = Vec::with_capacity(4);
        for (kind, poly) in BoundKind::ALL.iter().zip(polys.iter()) {
            let raw = poly.eval_scaled(x, -e)?;
            let bound = if kind.is_lower() {
                raw.scale(0.5)
            } else {
                raw.scale(0.25)
            };
            let margin = if kind.is_lower() { d - bound } else { bound - d };
            let status = if margin.certainly_positive() {
                BoundStatus::Holds
            } else if margin.certainly_negative() {
                BoundStatus::Fails
            } else {
                BoundStatus::Inconclusive
            };
            comparisons.push(BoundComparison {
                kind: *kind,
                bound,
                margin,
                status,
            });
        }
        Ok(BoundPoint {
            x,
            derivative: d,
            comparisons,
        })
    });
    let points = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let findings = points
        .iter()
        .flat_map(|p| {
            p.comparisons
                .iter()
                .filter(|c| !c.kind.is_derived() && c.status == BoundStatus::Fails)
                .map(move |c| BoundFinding {
                    m,
                    n,
                    kind: c.kind,
                    x: p.x,
                    derivative: p.derivative.value,
                    bound: c.bound.value,
                })
        })
        .collect();

    let [qp, qd, pp, pd] = polys;
    Ok(BoundReport {
        m,
        n,
        q_printed: qp,
        q_derived: qd,
        p_printed: pp,
        p_derived: pd,
        points,
        findings,
    })
}
