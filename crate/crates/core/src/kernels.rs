//! Laplace kernels behind the complete-monotonicity arguments.
//!
//! * `κ(t) = 1/(1 − e^{−t})`
//! * `h_k(t) = (κ(t) − 1/2) / t^k` for any integer `k`
//! * `ω(t) = 2t e^t / (1 − e^{2t})`, evaluated as `−2t e^{−t}/(1 − e^{−2t})`
//! * `(t/2)/tanh(t/2) − 1`
//!
//! Each kernel switches to a truncated Taylor expansion below
//! [`SMALL_T`], where the closed forms cancel catastrophically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{EvalResult, UNIT_ROUNDOFF};
use crate::quadrature;

/// Series switch point shared by all kernels.
pub const SMALL_T: f64 = 1.0 / 1024.0;

/// Default tolerance for finite endpoint limits in [`kernel_report`].
pub const LIMIT_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k")]
pub enum KernelId {
    H(i32),
    Omega,
    TanhKernel,
    Kappa,
}

impl std::fmt::Display for KernelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelId::H(k) => write!(f, "h[{k}]"),
            KernelId::Omega => write!(f, "omega"),
            KernelId::TanhKernel => write!(f, "tanh"),
            KernelId::Kappa => write!(f, "kappa"),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && !t.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("t = {t} must be positive")))
    }
}

/// `t / (1 − e^{−t})` without error tracking, for use inside integrands.
pub(crate) fn t_kappa_raw(t: f64) -> f64 {
    if t < SMALL_T {
        let t2 = t * t;
        1.0 + 0.5 * t + t2 / 12.0 - t2 * t2 / 720.0
    } else {
        t / -(-t).exp_m1()
    }
}

/// `1/(e^t − 1)`, the part of κ that decays.
fn excess(t: f64) -> EvalResult {
    if t < SMALL_T {
        let t2 = t * t;
        let v = 1.0 / t - 0.5 + t / 12.0 - t * t2 / 720.0;
        // next term t⁵/30240
        EvalResult::new(v, 3.0 * UNIT_ROUNDOFF * (1.0 / t) + t2 * t2 * t / 30240.0)
    } else {
        EvalResult::rounded(1.0 / t.exp_m1(), 3.0)
    }
}

/// `κ(t) = 1/(1 − e^{−t})`.
pub fn kappa(t: f64) -> Result<EvalResult> {
    check_t(t)?;
    Ok(excess(t) + 1.0)
}

/// `κ(t) − 1/2 = coth(t/2)/2`.
fn half_coth(t: f64) -> EvalResult {
    excess(t) + 0.5
}

/// `h_k(t) = (1/(1 − e^{−t}) − 1/2) / t^k`.
pub fn h(k: i32, t: f64) -> Result<EvalResult> {
    check_t(t)?;
    let num = half_coth(t);
    let scale = t.powi(-k);
    if !scale.is_finite() {
        return Err(Error::Range(format!("t^{} at t = {t}", -k)));
    }
    let v = num.value * scale;
    let rel = (k.unsigned_abs() as f64 + 3.0) * UNIT_ROUNDOFF;
    Ok(EvalResult::new(v, num.abs_error * scale + rel * v.abs()))
}

/// `ω(t) = 2t e^t/(1 − e^{2t}) = −t / sinh t`.
pub fn omega(t: f64) -> Result<EvalResult> {
    check_t(t)?;
    if t < SMALL_T {
        let t2 = t * t;
        let den = 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
        let v = -1.0 / den;
        Ok(EvalResult::new(v, 3.0 * UNIT_ROUNDOFF + t2 * t2 * t2 / 5040.0))
    } else {
        let v = -2.0 * t * (-t).exp() / -(-2.0 * t).exp_m1();
        Ok(EvalResult::rounded(v, 8.0))
    }
}

/// `(t/2)/tanh(t/2) − 1`.
pub fn tanh_kernel(t: f64) -> Result<EvalResult> {
    check_t(t)?;
    if t < SMALL_T {
        let t2 = t * t;
        let v = t2 / 12.0 - t2 * t2 / 720.0;
        Ok(EvalResult::new(v, 2.0 * UNIT_ROUNDOFF * v + t2 * t2 * t2 / 30240.0))
    } else {
        let half = 0.5 * t;
        let q = half / half.tanh();
        let v = q - 1.0;
        Ok(EvalResult::new(v, 4.0 * UNIT_ROUNDOFF * q + UNIT_ROUNDOFF * v.abs()))
    }
}

pub fn evaluate(kernel: KernelId, t: f64) -> Result<EvalResult> {
    match kernel {
        KernelId::H(k) => h(k, t),
        KernelId::Omega => omega(t),
        KernelId::TanhKernel => tanh_kernel(t),
        KernelId::Kappa => kappa(t),
    }
}

/// Value split as `fixed + rest` with `fixed` exact, so that comparisons
/// against the constant asymptote keep the information that rounding the
/// sum would destroy.
struct Split {
    fixed: f64,
    rest: EvalResult,
}

fn split(kernel: KernelId, t: f64) -> Result<Split> {
    match kernel {
        KernelId::Kappa => Ok(Split {
            fixed: 1.0,
            rest: excess(t),
        }),
        KernelId::H(0) => Ok(Split {
            fixed: 0.5,
            rest: excess(t),
        }),
        other => Ok(Split {
            fixed: 0.0,
            rest: evaluate(other, t)?,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Finite(f64),
    PosInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub end: Endpoint,
    pub expected: Limit,
    /// Points probed, moving from the grid endpoint outward.
    pub probes: Vec<f64>,
    pub observed: Vec<f64>,
    /// Distance to the limit at the last probe (finite limits) or the
    /// reciprocal of the last observed value (infinite limits).
    pub achieved: f64,
    pub passed: bool,
}

/// Open interval `(lower, upper)` every kernel value must fall in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lower: f64,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeCheck {
    pub range: Range,
    pub min_margin: f64,
    pub violations: Vec<usize>,
    pub inconclusive: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub kernel: KernelId,
    pub grid: Vec<f64>,
    pub values: Vec<EvalResult>,
    pub expected_monotonicity: Monotonicity,
    pub monotonicity_verdict: Monotonicity,
    /// Indices `i` where the comparison of points `i` and `i+1` did not
    /// clear the combined error bound.
    pub unresolved_pairs: Vec<usize>,
    pub limit_checks: Vec<LimitCheck>,
    pub range_check: RangeCheck,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_verdict == self.expected_monotonicity
            && self.limit_checks.iter().all(|c| c.passed)
            && self.range_check.passed
    }
}

/// Monotonic direction the closed-form analysis predicts.
pub fn expected_monotonicity(kernel: KernelId) -> Monotonicity {
    match kernel {
        KernelId::H(k) if k >= 0 => Monotonicity::Decreasing,
        KernelId::H(_) => Monotonicity::Increasing,
        KernelId::Omega | KernelId::TanhKernel => Monotonicity::Increasing,
        KernelId::Kappa => Monotonicity::Decreasing,
    }
}

pub fn expected_limits(kernel: KernelId) -> (Limit, Limit) {
    use Limit::*;
    match kernel {
        KernelId::H(k) if k <= -2 => (Finite(0.0), PosInfinity),
        KernelId::H(-1) => (Finite(1.0), PosInfinity),
        KernelId::H(0) => (PosInfinity, Finite(0.5)),
        KernelId::H(_) => (PosInfinity, Finite(0.0)),
        KernelId::Omega => (Finite(-1.0), Finite(0.0)),
        KernelId::TanhKernel => (Finite(0.0), PosInfinity),
        KernelId::Kappa => (PosInfinity, Finite(1.0)),
    }
}

pub fn expected_range(kernel: KernelId) -> Range {
    match kernel {
        KernelId::H(-1) => Range {
            lower: 1.0,
            upper: None,
        },
        KernelId::H(0) => Range {
            lower: 0.5,
            upper: None,
        },
        KernelId::H(_) | KernelId::TanhKernel => Range {
            lower: 0.0,
            upper: None,
        },
        KernelId::Omega => Range {
            lower: -1.0,
            upper: Some(0.0),
        },
        KernelId::Kappa => Range {
            lower: 1.0,
            upper: None,
        },
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Domain("grid points must be positive and finite".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    Ok(())
}

const PROBES: usize = 5;

fn limit_check(kernel: KernelId, end: Endpoint, start: f64, expected: Limit) -> Result<LimitCheck> {
    let step: f64 = match end {
        Endpoint::Zero => 0.1,
        Endpoint::Infinity => 10.0,
    };
    let probes: Vec<f64> = (0..PROBES).map(|i| start * step.powi(i as i32)).collect();
    let observed = probes
        .iter()
        .map(|&t| evaluate(kernel, t).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let (achieved, passed) = match expected {
        Limit::Finite(l) => {
            let dist: Vec<f64> = observed.iter().map(|v| (v - l).abs()).collect();
            let approaching = dist.windows(2).all(|w| w[1] <= w[0]);
            let last = *dist.last().expect("probes");
            (last, approaching && last <= LIMIT_TOLERANCE)
        }
        Limit::PosInfinity => {
            let growing = observed.windows(2).all(|w| w[1] >= w[0]);
            let last = *observed.last().expect("probes");
            (1.0 / last, growing && last > 0.0 && 1.0 / last <= LIMIT_TOLERANCE)
        }
    };
    Ok(LimitCheck {
        end,
        expected,
        probes,
        observed,
        achieved,
        passed,
    })
}

/// Evaluates a kernel over a grid and checks its monotonic direction,
/// endpoint limits and range.
///
/// A direction is only asserted when every adjacent difference exceeds the
/// sum of the two error bounds; otherwise the verdict is `None` and the
/// unresolved pairs are listed.
pub fn kernel_report(kernel: KernelId, grid: &[f64]) -> Result<KernelReport> {
    validate_grid(grid)?;
    if grid.is_empty() {
        return Err(Error::Domain("kernel_report needs a non-empty grid".into()));
    }
    let splits = grid
        .iter()
        .map(|&t| split(kernel, t))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<EvalResult> = splits.iter().map(|s| s.rest + s.fixed).collect();

    let mut ups = 0;
    let mut downs = 0;
    let mut unresolved = Vec::new();
    for (i, w) in splits.windows(2).enumerate() {
        let diff = (w[1].rest - w[0].rest) + (w[1].fixed - w[0].fixed);
        match diff.certified_sign(1.0) {
            Some(1) => ups += 1,
            Some(_) => downs += 1,
            None => unresolved.push(i),
        }
    }
    let pairs = grid.len().saturating_sub(1);
    let verdict = if pairs > 0 && ups == pairs {
        Monotonicity::Increasing
    } else if pairs > 0 && downs == pairs {
        Monotonicity::Decreasing
    } else {
        Monotonicity::None
    };

    let (at_zero, at_inf) = expected_limits(kernel);
    let limit_checks = vec![
        limit_check(kernel, Endpoint::Zero, grid[0], at_zero)?,
        limit_check(kernel, Endpoint::Infinity, grid[grid.len() - 1], at_inf)?,
    ];

    let range = expected_range(kernel);
    let mut min_margin = f64::INFINITY;
    let mut violations = Vec::new();
    let mut inconclusive = Vec::new();
    for (i, s) in splits.iter().enumerate() {
        let above = s.rest + (s.fixed - range.lower);
        let mut margins = vec![above];
        if let Some(u) = range.upper {
            margins.push(-(s.rest + (s.fixed - u)));
        }
        for m in margins {
            min_margin = min_margin.min(m.value);
            if m.certainly_negative() {
                violations.push(i);
            } else if !m.certainly_positive() {
                inconclusive.push(i);
            }
        }
    }
    let range_check = RangeCheck {
        range,
        min_margin,
        passed: violations.is_empty() && inconclusive.is_empty(),
        violations,
        inconclusive,
    };

    Ok(KernelReport {
        kernel,
        grid: grid.to_vec(),
        values,
        expected_monotonicity: expected_monotonicity(kernel),
        monotonicity_verdict: verdict,
        unresolved_pairs: unresolved,
        limit_checks,
        range_check,
    })
}

/// Γ(r) for `r > 0`: exact factorial for integers, quadrature otherwise.
pub fn gamma_for_identity(r: f64) -> Result<EvalResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("r = {r} must be positive")));
    }
    if r.fract() == 0.0 && r <= 171.0 {
        let mut f = 1.0f64;
        let mut k = 2.0;
        while k < r {
            f *= k;
            k += 1.0;
        }
        let err = if r <= 23.0 { 0.0 } else { r * UNIT_ROUNDOFF * f };
        return Ok(EvalResult::new(f, err));
    }
    power_laplace_integral(r, 1.0)
}

/// `∫₀^∞ t^{r−1} e^{−xt} dt` by quadrature.
///
/// On `[0, 1]` the substitution `s = t^r` removes the endpoint singularity:
/// the piece becomes `(1/r) ∫₀¹ exp(−x s^{1/r}) ds`.
pub fn power_laplace_integral(r: f64, x: f64) -> Result<EvalResult> {
    if !(r > 0.0 && x > 0.0) {
        return Err(Error::Domain(format!("need r > 0 and x > 0, got r = {r}, x = {x}")));
    }
    // rough magnitude Γ(r)/x^r, used only to set a relative tolerance
    let scale = x.powf(-r) * if r > 2.0 { (r - 1.0).powf(r - 1.0) * (1.0 - r).exp() } else { 1.0 };
    let tol = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let inv_r = 1.0 / r;
    let head = quadrature::integrate(
        |s: f64| (-x * s.powf(inv_r)).exp(),
        0.0,
        1.0,
        0.5 * tol * r,
        quadrature::DEFAULT_MAX_INTERVALS,
    )?
    .scale(inv_r);
    let a = r - 1.0;
    let tail = |big_t: f64| {
        let slope = if a > 0.0 { x - a / big_t } else { x };
        if slope <= 0.0 {
            f64::INFINITY
        } else {
            (a * big_t.ln() - x * big_t).exp() / slope
        }
    };
    let rest = quadrature::integrate_semi_infinite(
        |t: f64| (a * t.ln() - x * t).exp(),
        1.0,
        tail,
        0.5 * tol,
    )?;
    let total = head + rest;
    Ok(EvalResult::new(
        total.value,
        total.abs_error + (r.abs() + 10.0) * UNIT_ROUNDOFF * total.value.abs(),
    ))
}

/// `|x^{−r} − Γ(r)^{−1} ∫₀^∞ t^{r−1} e^{−xt} dt|`.
pub fn laplace_power_identity(r: f64, x: f64) -> Result<f64> {
    let integral = power_laplace_integral(r, x)?;
    let gamma = gamma_for_identity(r)?;
    Ok((x.powf(-r) - integral.value / gamma.value).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        let small = 1e-8;
        assert!((kappa(small).unwrap().value * small - 1.0).abs() < 1e-6);
        let r = kappa(std::f64::consts::LN_2).unwrap();
        assert!((r.value - 2.0).abs() <= r.abs_error + 4.0 * f64::EPSILON);
        assert!((kappa(50.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!(matches!(kappa(0.0), Err(Error::Domain(_))));
        assert!(matches!(kappa(-2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn h_examples() {
        assert!((h(-1, 1e-6).unwrap().value - 1.0).abs() < 1e-5);
        assert!((h(0, 50.0).unwrap().value - 0.5).abs() < 1e-12);
        let direct = 1.0 / (1.0 - (-1.0f64).exp()) - 0.5;
        let r = h(1, 1.0).unwrap();
        assert!((r.value - direct).abs() < 1e-15);
        assert!((r.value - (kappa(1.0).unwrap().value - 0.5)).abs() <= r.abs_error + 1e-16);
        assert!((r.value - 1.081_976_706_869_326_4).abs() < 1e-15);
        assert!(matches!(h(3, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn omega_examples() {
        assert!((omega(1e-8).unwrap().value + 1.0).abs() < 1e-6);
        // ω(50) = −100 e^{−50}/(1 − e^{−100}) ≈ −1.93e−20
        let far = omega(50.0).unwrap().value;
        let exact = -100.0 * (-50.0f64).exp();
        assert!((far - exact).abs() <= 1e-14 * exact.abs());
        assert!(far.abs() < 2e-20);
        let e = std::f64::consts::E;
        let one = omega(1.0).unwrap();
        let closed = -2.0 * e / (e * e - 1.0);
        assert!((one.value - closed).abs() <= one.abs_error + 1e-16);
        assert!((one.value + 0.850_918_128_239_321_5).abs() < 1e-15);
    }

    #[test]
    fn omega_does_not_overflow() {
        let v = omega(800.0).unwrap();
        assert!(v.value <= 0.0 && v.value.is_finite());
    }

    #[test]
    fn tanh_kernel_examples() {
        let t = 1e-6;
        assert!((tanh_kernel(t).unwrap().value - t * t / 12.0).abs() < 1e-18);
        let two = tanh_kernel(2.0).unwrap().value;
        assert!((two - (1.0 / 1f64.tanh() - 1.0)).abs() < 1e-15);
        assert!((two - 0.313_035_285_499_331_3).abs() < 1e-14);
    }

    #[test]
    fn series_and_closed_forms_meet_at_switch() {
        let below = SMALL_T * (1.0 - 1e-12);
        let above = SMALL_T;
        for k in [KernelId::Kappa, KernelId::Omega, KernelId::TanhKernel, KernelId::H(-2), KernelId::H(1)] {
            let a = evaluate(k, below).unwrap();
            let b = evaluate(k, above).unwrap();
            let scale = a.value.abs().max(1e-300);
            assert!((a.value - b.value).abs() / scale < 1e-9, "{k}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn h_zero_report_resolves_flat_tail() {
        let grid: Vec<f64> = (0..64)
            .map(|i| 1e-6 * (5e7f64).powf(i as f64 / 63.0))
            .collect();
        let rep = kernel_report(KernelId::H(0), &grid).unwrap();
        assert_eq!(rep.monotonicity_verdict, Monotonicity::Decreasing);
        assert!(rep.range_check.passed);
    }

    #[test]
    fn report_rejects_unsorted_grid() {
        assert!(kernel_report(KernelId::Omega, &[1.0, 0.5]).is_err());
        assert!(kernel_report(KernelId::Omega, &[-1.0, 0.5]).is_err());
    }

    #[test]
    fn single_point_grid_has_no_verdict() {
        let rep = kernel_report(KernelId::Omega, &[1.0]).unwrap();
        assert_eq!(rep.monotonicity_verdict, Monotonicity::None);
    }

    #[test]
    fn laplace_identity_examples() {
        assert!(laplace_power_identity(1.0, 2.0).unwrap() <= 1e-10);
        assert!(laplace_power_identity(2.0, 1.0).unwrap() <= 1e-10);
        assert!(laplace_power_identity(5.5, 0.5).unwrap() <= 1e-9);
    }
}
