//! Derivatives of `f_{m,n}(x) = [ψ⁽ᵐ⁾(x)]² + ψ⁽ⁿ⁾(x)` and
//! complete-monotonicity checks on sampling grids.
//!
//! By the Leibniz rule,
//! `f⁽ˡ⁾ = ψ⁽ⁿ⁺ˡ⁾ + Σ_{j=0}^{l} C(l, j) ψ⁽ᵐ⁺ʲ⁾ ψ⁽ᵐ⁺ˡ⁻ʲ⁾`,
//! so every derivative is a closed-form combination of polygamma values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{ErrorSum, EvalResult, UNIT_ROUNDOFF};
use crate::exec::Execution;
use crate::kernels::{self, validate_grid};
use crate::polygamma::{self, PrecisionConfig};
use crate::quadrature;

/// Default highest derivative order checked.
pub const DEFAULT_MAX_ORDER: u32 = 8;

/// Fraction of inconclusive grid entries tolerated by a CM verdict.
pub const MAX_INCONCLUSIVE_FRACTION: f64 = 0.01;

/// Second index `n` and squared index `m` of `f_{m,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyIndex {
    pub m: u32,
    pub n: u32,
}

impl FamilyIndex {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Domain(format!(
                "family indices must be positive, got ({m}, {n})"
            )));
        }
        Ok(FamilyIndex { m, n })
    }
}

impl std::fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let mut c = 1u128;
    for i in 0..k {
        c = c * (n as u128 - i) / (i + 1);
    }
    u64::try_from(c).expect("binomial coefficient exceeds u64")
}

/// Polygamma values `ψ⁽ᵏ⁾(x)` for a contiguous range of orders.
struct PsiTable {
    lo: u32,
    values: Vec<EvalResult>,
}

impl PsiTable {
    fn build(x: f64, lo: u32, hi: u32, cfg: &PrecisionConfig) -> Result<Self> {
        let values = (lo..=hi)
            .map(|k| polygamma::polygamma(k, x, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(PsiTable { lo, values })
    }

    fn get(&self, k: u32) -> EvalResult {
        self.values[(k - self.lo) as usize]
    }
}

fn order_range(idx: FamilyIndex, max_order: u32, cfg: &PrecisionConfig) -> Result<(u32, u32)> {
    let top = (idx.m + max_order).max(idx.n + max_order);
    if top > cfg.order_cap {
        return Err(Error::Capability {
            order: top,
            cap: cfg.order_cap,
        });
    }
    Ok((idx.m.min(idx.n), top))
}

fn derivative_from_table(idx: FamilyIndex, order: u32, table: &PsiTable) -> EvalResult {
    let mut acc = ErrorSum::new();
    acc.add(table.get(idx.n + order));
    for j in 0..=order {
        let c = binomial(order, j) as f64;
        let prod = table.get(idx.m + j) * table.get(idx.m + order - j);
        acc.add(prod.scale(c));
    }
    acc.result()
}

/// `f_{m,n}(x)`.
pub fn f_value(idx: FamilyIndex, x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    f_derivative(idx, 0, x, cfg)
}

/// `f_{m,n}⁽ˡ⁾(x)` through the Leibniz expansion.
pub fn f_derivative(idx: FamilyIndex, order: u32, x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    FamilyIndex::new(idx.m, idx.n)?;
    let (lo, hi) = order_range(idx, order, cfg)?;
    let table = PsiTable::build(x, lo, hi, cfg)?;
    Ok(derivative_from_table(idx, order, &table))
}

/// `|Δₕˡ f(x)/hˡ − f⁽ˡ⁾(x)|` using the central difference of order `l`.
pub fn finite_difference_crosscheck(
    idx: FamilyIndex,
    order: u32,
    x: f64,
    step: f64,
    cfg: &PrecisionConfig,
) -> Result<f64> {
    if order == 0 {
        return Err(Error::Domain("finite differences need order >= 1".into()));
    }
    if !(step > 0.0) || x - order as f64 * step / 2.0 <= 0.0 {
        return Err(Error::Domain(format!(
            "stencil around x = {x} with step {step} leaves (0, inf)"
        )));
    }
    let half = order as f64 / 2.0;
    let mut acc = ErrorSum::new();
    for i in 0..=order {
        let c = binomial(order, i) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let fx = f_value(idx, x + (half - i as f64) * step, cfg)?;
        acc.add_value(sign * c * fx.value);
    }
    let fd = acc.result().value / step.powi(order as i32);
    let exact = f_derivative(idx, order, x, cfg)?;
    Ok((fd - exact.value).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Positive,
    Inconclusive,
    Violation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmEntry {
    pub order: u32,
    pub x: f64,
    /// `(−1)ˡ f⁽ˡ⁾(x)` with its error bound.
    pub value: EvalResult,
    pub status: EntryStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum CmVerdict {
    ConsistentWithCm,
    Violation {
        order: u32,
        x: f64,
        value: f64,
        margin: f64,
    },
    Inconclusive {
        points: Vec<(u32, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmReport {
    pub index: FamilyIndex,
    pub max_order: u32,
    pub grid: Vec<f64>,
    /// Ordered by grid point, then by derivative order.
    pub entries: Vec<CmEntry>,
    pub verdict: CmVerdict,
    pub violations: usize,
    pub inconclusive: usize,
}

impl CmReport {
    pub fn inconclusive_fraction(&self) -> f64 {
        if self.entries.is_empty() {
            0.0
        } else {
            self.inconclusive as f64 / self.entries.len() as f64
        }
    }

    pub fn min_relative_margin(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                if e.value.abs_error > 0.0 {
                    e.value.value / e.value.abs_error
                } else if e.value.value >= 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn classify_entry(order: u32, x: f64, raw: EvalResult) -> CmEntry {
    let value = if order.is_multiple_of(2) { raw } else { -raw };
    let status = if value.certainly_positive() {
        EntryStatus::Positive
    } else if value.certainly_negative() {
        EntryStatus::Violation
    } else {
        EntryStatus::Inconclusive
    };
    CmEntry {
        order,
        x,
        value,
        status,
    }
}

/// Checks the sign of `(−1)ˡ f⁽ˡ⁾(x)` for `l = 0..=max_order` at every grid
/// point.
///
/// A point with `|value| ≤ abs_error` is inconclusive, never a violation.
/// The report is consistent with complete monotonicity when there is no
/// violation and at most [`MAX_INCONCLUSIVE_FRACTION`] of the entries are
/// inconclusive.
pub fn cm_check(
    idx: FamilyIndex,
    max_order: u32,
    grid: &[f64],
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Result<CmReport> {
    FamilyIndex::new(idx.m, idx.n)?;
    validate_grid(grid)?;
    let (lo, hi) = order_range(idx, max_order, cfg)?;

    let per_point = exec.map(grid, |&x| -> Result<Vec<CmEntry>> {
        let table = PsiTable::build(x, lo, hi, cfg)?;
        Ok((0..=max_order)
            .map(|l| classify_entry(l, x, derivative_from_table(idx, l, &table)))
            .collect())
    });
    let mut entries = Vec::with_capacity(grid.len() * (max_order as usize + 1));
    for row in per_point {
        entries.extend(row?);
    }

    let violations = entries
        .iter()
        .filter(|e| e.status == EntryStatus::Violation)
        .count();
    let unresolved: Vec<(u32, f64)> = entries
        .iter()
        .filter(|e| e.status == EntryStatus::Inconclusive)
        .map(|e| (e.order, e.x))
        .collect();
    let inconclusive = unresolved.len();

    let verdict = if let Some(v) = entries
        .iter()
        .find(|e| e.status == EntryStatus::Violation)
    {
        CmVerdict::Violation {
            order: v.order,
            x: v.x,
            value: v.value.value,
            margin: -v.value.value - v.value.abs_error,
        }
    } else if !entries.is_empty()
        && inconclusive as f64 / entries.len() as f64 > MAX_INCONCLUSIVE_FRACTION
    {
        CmVerdict::Inconclusive { points: unresolved }
    } else {
        CmVerdict::ConsistentWithCm
    };

    Ok(CmReport {
        index: idx,
        max_order,
        grid: grid.to_vec(),
        entries,
        verdict,
        violations,
        inconclusive,
    })
}

/// `f_{1,2}(x) − f_{1,2}(x+1) = (2/x²)(ψ'(x) − 1/(2x²) − 1/x)`.
pub fn shift_difference_closed_form(x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    let tri = polygamma::polygamma(1, x, cfg)?;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let correction = EvalResult::rounded(0.5 * inv2 + inv, 4.0);
    let factor = EvalResult::rounded(2.0 * inv2, 3.0);
    Ok((tri - correction) * factor)
}

/// `(2/x²) ∫₀^∞ ((t/2)/tanh(t/2) − 1) e^{−xt} dt` by quadrature.
pub fn shift_difference_laplace(x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let integrand = |t: f64| -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            kernels::tanh_kernel(t).map(|r| r.value).unwrap_or(0.0) * (-x * t).exp()
        }
    };
    // (t/2) coth(t/2) − 1 ≤ t/2, and ∫_T^∞ (t/2) e^{−xt} = e^{−xT}(T/x + 1/x²)/2
    let tail = |big_t: f64| 0.5 * (-x * big_t).exp() * (big_t / x + 1.0 / (x * x));
    // the integral is ~ 1/(6x³) for large x and ~ 1/(2x²) for small x
    let magnitude = (1.0 / (6.0 * x * x * x)).min(0.5 / (x * x));
    let tol = 0.25 * cfg.budget_for(magnitude).min(1e-13 * magnitude.max(1e-300));
    let head = quadrature::integrate(integrand, 0.0, 1.0, 0.5 * tol, quadrature::DEFAULT_MAX_INTERVALS)?;
    let rest = quadrature::integrate_semi_infinite(integrand, 1.0, tail, 0.5 * tol)?;
    let integral = head + rest;
    let integral = EvalResult::new(
        integral.value,
        integral.abs_error + 16.0 * UNIT_ROUNDOFF * integral.value.abs(),
    );
    Ok(integral * EvalResult::rounded(2.0 / (x * x), 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftDifferenceCheck {
    pub x: f64,
    pub direct: EvalResult,
    pub closed_form: EvalResult,
    pub laplace: EvalResult,
    pub closed_form_residual: f64,
    pub laplace_residual: f64,
}

impl ShiftDifferenceCheck {
    pub fn residual(&self) -> f64 {
        self.closed_form_residual.max(self.laplace_residual)
    }
}

/// Both residuals of the shift-difference identity for `f_{1,2}` at `x`.
pub fn shift_difference_report(x: f64, cfg: &PrecisionConfig) -> Result<ShiftDifferenceCheck> {
    let idx = FamilyIndex { m: 1, n: 2 };
    let direct = f_value(idx, x, cfg)? - f_value(idx, x + 1.0, cfg)?;
    let closed_form = shift_difference_closed_form(x, cfg)?;
    let laplace = shift_difference_laplace(x, cfg)?;
    Ok(ShiftDifferenceCheck {
        x,
        direct,
        closed_form,
        laplace,
        closed_form_residual: (direct.value - closed_form.value).abs(),
        laplace_residual: (direct.value - laplace.value).abs(),
    })
}

/// `max` of the closed-form and Laplace residuals of
/// `f_{1,2}(x) − f_{1,2}(x+1)`.
pub fn shift_difference_kernel_check(x: f64, cfg: &PrecisionConfig) -> Result<f64> {
    Ok(shift_difference_report(x, cfg)?.residual())
}

/// Remainder checkpoints used by [`telescoping_check`].
pub const TELESCOPING_CHECKPOINTS: [usize; 3] = [10, 100, 1000];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelescopingEntry {
    pub x: f64,
    /// `Σ_{k=0}^{N} [f(x+k) − f(x+k+1)]`, each difference in closed form.
    pub partial_sum: EvalResult,
    /// `f(x) − f(x+N+1)` from direct evaluation.
    pub direct: EvalResult,
    pub residual: f64,
    /// `(N, |f(x+N+1)|)` at each checkpoint.
    pub remainders: Vec<(usize, f64)>,
    pub remainder_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelescopingReport {
    pub terms: usize,
    pub entries: Vec<TelescopingEntry>,
}

impl TelescopingReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// Telescoping check for `f_{1,2}`: the partial sum of closed-form shift
/// differences must match `f(x) − f(x+N+1)`, and the remainder
/// `f(x+N+1)` must shrink across [`TELESCOPING_CHECKPOINTS`].
pub fn telescoping_check(
    terms: usize,
    grid: &[f64],
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Result<TelescopingReport> {
    if terms == 0 {
        return Err(Error::Domain("telescoping needs N >= 1".into()));
    }
    validate_grid(grid)?;
    let idx = FamilyIndex { m: 1, n: 2 };
    let rows = exec.map(grid, |&x| -> Result<TelescopingEntry> {
        let mut acc = ErrorSum::new();
        for k in 0..=terms {
            acc.add(shift_difference_closed_form(x + k as f64, cfg)?);
        }
        let partial_sum = acc.result();
        let direct = f_value(idx, x, cfg)? - f_value(idx, x + terms as f64 + 1.0, cfg)?;
        let remainders = TELESCOPING_CHECKPOINTS
            .iter()
            .map(|&n| Ok((n, f_value(idx, x + n as f64 + 1.0, cfg)?.value.abs())))
            .collect::<Result<Vec<_>>>()?;
        let remainder_decreasing = remainders.windows(2).all(|w| w[1].1 < w[0].1);
        Ok(TelescopingEntry {
            x,
            residual: (partial_sum.value - direct.value).abs(),
            partial_sum,
            direct,
            remainders,
            remainder_decreasing,
        })
    });
    Ok(TelescopingReport {
        terms,
        entries: rows.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn zero_index_rejected() {
        assert!(FamilyIndex::new(0, 2).is_err());
        let bad = FamilyIndex { m: 0, n: 1 };
        assert!(f_value(bad, 1.0, &cfg()).is_err());
    }

    #[test]
    fn order_cap_is_enforced() {
        let idx = FamilyIndex { m: 3, n: 5 };
        assert!(matches!(
            f_derivative(idx, 60, 1.0, &cfg()),
            Err(Error::Capability { order: 65, cap: 64 })
        ));
    }

    #[test]
    fn derivative_order_zero_is_f_value_bitwise() {
        for &(m, n) in &[(1, 2), (3, 5), (2, 2)] {
            let idx = FamilyIndex { m, n };
            for &x in &[0.3, 1.0, 7.5] {
                let a = f_value(idx, x, &cfg()).unwrap();
                let b = f_derivative(idx, 0, x, &cfg()).unwrap();
                assert_eq!(a.value.to_bits(), b.value.to_bits());
                assert_eq!(a.abs_error.to_bits(), b.abs_error.to_bits());
            }
        }
    }

    #[test]
    fn inconclusive_is_never_a_violation() {
        let e = classify_entry(0, 1.0, EvalResult::new(-1e-20, 1e-18));
        assert_eq!(e.status, EntryStatus::Inconclusive);
        let e = classify_entry(1, 1.0, EvalResult::new(1e-10, 1e-18));
        assert_eq!(e.status, EntryStatus::Violation);
    }

    #[test]
    fn telescoping_rejects_zero_terms() {
        assert!(telescoping_check(0, &[1.0], &cfg(), Execution::Sequential).is_err());
    }

    #[test]
    fn stencil_must_stay_positive() {
        let idx = FamilyIndex { m: 1, n: 2 };
        assert!(finite_difference_crosscheck(idx, 2, 0.01, 0.1, &cfg()).is_err());
    }
}
