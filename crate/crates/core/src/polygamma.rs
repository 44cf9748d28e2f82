//! Digamma and polygamma functions on the positive real axis.
//!
//! Three independent routes are provided:
//!
//! * [`digamma`] / [`polygamma`]: shift `x` upward with the recurrence
//!   `ψ⁽ⁿ⁾(x) = ψ⁽ⁿ⁾(x+1) − (−1)ⁿ n!/x^{n+1}`, then sum the Hurwitz tail
//!   `ζ(n+1, a)` with Euler–Maclaurin corrections.
//! * [`digamma_series`] / [`polygamma_series`]: plain summation of the
//!   defining series with an integral-test bracket for the tail. Slow, but
//!   shares no code path with the first route; it is the reference oracle.
//! * [`polygamma_quadrature`]: the Laplace representation
//!   `ψ⁽ⁿ⁾(x) = (−1)^{n+1} ∫₀^∞ tⁿ e^{−xt} / (1 − e^{−t}) dt`.
//!
//! All results carry an absolute error bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{ErrorSum, EvalResult, UNIT_ROUNDOFF};
use crate::kernels::t_kappa_raw;
use crate::quadrature;

/// Euler–Mascheroni constant (to double precision).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Euler–Mascheroni constant to 40 significant digits.
pub const EULER_GAMMA_DIGITS: &str = "0.5772156649015328606065120900824024310422";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Absolute error budget.
    pub target_abs_error: f64,
    /// Relative error budget; a result passes if it meets either budget.
    pub target_rel_error: f64,
    pub max_series_terms: usize,
    /// Arguments are shifted above this value before tail summation.
    pub recurrence_shift_target: f64,
    /// Highest polygamma order any caller may request.
    pub order_cap: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            target_abs_error: 1e-12,
            target_rel_error: 1e-12,
            max_series_terms: 10_000_000,
            recurrence_shift_target: 10.0,
            order_cap: 64,
        }
    }
}

impl PrecisionConfig {
    pub fn with_target(target_abs_error: f64) -> Self {
        PrecisionConfig {
            target_abs_error,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0) || !(self.target_rel_error > 0.0) {
            return Err(Error::Domain("error budgets must be positive".into()));
        }
        if !(self.recurrence_shift_target >= 1.0) {
            return Err(Error::Domain(
                "recurrence_shift_target must be at least 1".into(),
            ));
        }
        if self.max_series_terms == 0 {
            return Err(Error::Domain("max_series_terms must be positive".into()));
        }
        Ok(())
    }

    /// The error allowed for a result of magnitude `magnitude`.
    pub fn budget_for(&self, magnitude: f64) -> f64 {
        self.target_abs_error
            .max(self.target_rel_error * magnitude.abs())
    }

    fn accept(&self, r: EvalResult, terms: usize) -> Result<EvalResult> {
        let target = self.budget_for(r.value);
        if r.is_finite() && r.abs_error <= target {
            Ok(r)
        } else if !r.value.is_finite() {
            Err(Error::Range(format!("result {} is not finite", r.value)))
        } else {
            Err(Error::Convergence {
                target,
                best_bound: r.abs_error,
                terms,
            })
        }
    }
}

/// Order of a polygamma function: `0` is ψ itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PolyOrder(pub u32);

impl From<u32> for PolyOrder {
    fn from(n: u32) -> Self {
        PolyOrder(n)
    }
}

/// `ψ⁽ⁿ⁾(x)` for any order, dispatching to [`digamma`] at order zero.
pub fn psi(order: PolyOrder, x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    match order.0 {
        0 => digamma(x, cfg),
        n => polygamma(n, x, cfg),
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must be positive and finite")))
    }
}

/// `n!` with its rounding error (exact up to 22!).
pub fn factorial(n: u32) -> EvalResult {
    let mut f = 1.0f64;
    for k in 2..=n {
        f *= k as f64;
    }
    if n <= 22 {
        EvalResult::exact(f)
    } else {
        EvalResult::new(f, n as f64 * UNIT_ROUNDOFF * f)
    }
}

// B_{2j} for j = 1..=15 as exact numerator/denominator pairs.
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// Number of Euler–Maclaurin correction terms ever attempted.
const MAX_EM_TERMS: usize = 40;

/// `B_{2j} / (2j)!` for `j ≥ 1`.
///
/// Beyond the tabulated range the identity
/// `B_{2j}/(2j)! = (−1)^{j+1} 2 ζ(2j) / (2π)^{2j}` is used; ζ(2j) for
/// `j > 15` equals 1 to within 2⁻³², so a handful of terms suffice.
fn bernoulli_over_factorial(j: usize) -> f64 {
    if j <= BERNOULLI_EVEN.len() {
        let (num, den) = BERNOULLI_EVEN[j - 1];
        let mut f = 1.0;
        for k in 2..=(2 * j) {
            f *= k as f64;
        }
        num / den / f
    } else {
        let e = 2 * j as i32;
        let zeta: f64 = (1..=6).map(|k| (k as f64).powi(-e)).sum();
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sign * 2.0 * zeta / (2.0 * std::f64::consts::PI).powi(e)
    }
}

/// `B_{2j}` itself, for the asymptotic digamma expansion.
fn bernoulli_even(j: usize) -> f64 {
    let mut f = 1.0;
    for k in 2..=(2 * j) {
        f *= k as f64;
    }
    bernoulli_over_factorial(j) * f
}

/// How far the argument is shifted before the tail expansion is used.
/// Higher orders need a larger argument for the Euler–Maclaurin terms to
/// decay to roundoff before they start to grow.
fn shift_target(order: u32, cfg: &PrecisionConfig) -> f64 {
    cfg.recurrence_shift_target.max(order as f64 + 11.0)
}

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (a+k)^{−s}` for integer `s ≥ 2` and
/// `a` large enough that the Euler–Maclaurin terms decay to roundoff.
fn hurwitz_tail(s: u32, a: f64) -> Result<(EvalResult, usize)> {
    let sf = s as f64;
    let inv_a = 1.0 / a;
    let p = inv_a.powi(s as i32);
    if p == 0.0 || !p.is_finite() {
        return Err(Error::Range(format!("a^-{s} at a = {a}")));
    }
    let lead = a * p / (sf - 1.0);
    let half = 0.5 * p;
    let mut acc = ErrorSum::new();
    acc.add_value(lead);
    acc.add_value(half);
    let mut magnitude = lead.abs() + half.abs();

    // c_j = s (s+1) … (s+2j−2) / a^{2j−1}
    let mut c = sf * inv_a;
    let inv_a2 = inv_a * inv_a;
    let mut remainder = None;
    let mut used = 0;
    for j in 1..=MAX_EM_TERMS {
        let term = bernoulli_over_factorial(j) * c * p;
        let running = lead + half;
        if term.abs() <= 0.25 * UNIT_ROUNDOFF * running.abs() {
            remainder = Some(term.abs());
            break;
        }
        acc.add_value(term);
        magnitude += term.abs();
        used = j;
        let jf = j as f64;
        c *= (sf + 2.0 * jf - 1.0) * (sf + 2.0 * jf) * inv_a2;
    }
    let Some(remainder) = remainder else {
        return Err(Error::Convergence {
            target: UNIT_ROUNDOFF,
            best_bound: magnitude,
            terms: MAX_EM_TERMS,
        });
    };
    let r = acc.result();
    let rel = (3.0 * sf + 16.0 + 6.0 * used as f64) * UNIT_ROUNDOFF;
    Ok((
        EvalResult::new(r.value, r.abs_error + rel * magnitude + 2.0 * remainder),
        used + 2,
    ))
}

/// `ψ(x)` for `x > 0`.
pub fn digamma(x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    check_x(x)?;
    cfg.validate()?;
    let target = shift_target(0, cfg);
    let shifts = if x < target {
        (target - x).ceil() as usize
    } else {
        0
    };
    if shifts > cfg.max_series_terms {
        return Err(Error::Convergence {
            target: cfg.target_abs_error,
            best_bound: f64::INFINITY,
            terms: shifts,
        });
    }

    // ψ(x) = ψ(x + K) − Σ_{k<K} 1/(x+k)
    let mut acc = ErrorSum::new();
    for k in (0..shifts).rev() {
        let v = 1.0 / (x + k as f64);
        acc.add(EvalResult::rounded(-v, 3.0));
    }
    let a = x + shifts as f64;

    // ψ(a) ~ ln a − 1/(2a) − Σ B_{2j} / (2j a^{2j})
    let ln_a = a.ln();
    acc.add(EvalResult::rounded(ln_a, 2.0));
    // representation error of a itself perturbs ln a by ≤ u
    acc.add(EvalResult::new(-0.5 / a, UNIT_ROUNDOFF * (1.0 + 1.0 / a)));
    let inv_a2 = 1.0 / (a * a);
    let mut pow = inv_a2;
    let mut remainder = None;
    let mut used = shifts + 2;
    for j in 1..=MAX_EM_TERMS {
        let term = -bernoulli_even(j) / (2.0 * j as f64) * pow;
        if term.abs() <= 0.25 * UNIT_ROUNDOFF * ln_a.abs() {
            remainder = Some(term.abs());
            break;
        }
        acc.add(EvalResult::rounded(term, 6.0 * j as f64 + 8.0));
        pow *= inv_a2;
        used += 1;
    }
    let Some(remainder) = remainder else {
        return Err(Error::Convergence {
            target: cfg.target_abs_error,
            best_bound: f64::INFINITY,
            terms: used,
        });
    };
    let r = acc.result();
    cfg.accept(EvalResult::new(r.value, r.abs_error + 2.0 * remainder), used)
}

/// `ψ⁽ⁿ⁾(x)` for `n ≥ 1`, `x > 0`.
pub fn polygamma(n: u32, x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    check_x(x)?;
    cfg.validate()?;
    if n == 0 {
        return Err(Error::Domain("polygamma requires n >= 1; use digamma".into()));
    }
    if n > cfg.order_cap {
        return Err(Error::Capability {
            order: n,
            cap: cfg.order_cap,
        });
    }
    let s = n + 1;
    let target = shift_target(n, cfg);
    let shifts = if x < target {
        (target - x).ceil() as usize
    } else {
        0
    };
    if shifts > cfg.max_series_terms {
        return Err(Error::Convergence {
            target: cfg.target_abs_error,
            best_bound: f64::INFINITY,
            terms: shifts,
        });
    }

    let direct_rel = (3.0 * s as f64 + 8.0) * UNIT_ROUNDOFF;
    let mut acc = ErrorSum::new();
    for k in (0..shifts).rev() {
        let v = (1.0 / (x + k as f64)).powi(s as i32);
        if !v.is_finite() {
            return Err(Error::Range(format!("(x+{k})^-{s} overflows at x = {x}")));
        }
        acc.add(EvalResult::new(v, direct_rel * v));
    }
    let a = x + shifts as f64;
    let (tail, tail_terms) = hurwitz_tail(s, a)?;
    acc.add(tail);
    let zeta = acc.result();

    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let r = factorial(n) * zeta;
    cfg.accept(r.scale(sign), shifts + tail_terms)
}

/// Reference route for `ψ⁽ⁿ⁾(x)`: direct partial sum of `Σ (x+k)^{−(n+1)}`
/// with the integral-test bracket on the tail.
pub fn polygamma_series(n: u32, x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    check_x(x)?;
    cfg.validate()?;
    if n == 0 {
        return digamma_series(x, cfg);
    }
    let s = n + 1;
    let sf = s as f64;
    let fact = factorial(n);
    // |ψ⁽ⁿ⁾(x)| > n!/x^{n+1}, so this relative budget is never looser than asked.
    let floor = fact.value * (1.0 / x).powi(s as i32);
    let budget = cfg.budget_for(floor) / fact.value;

    // tail half-width ≈ (x+N)^{−s}/2; aim for half the budget, then cap
    let wanted = ((1.0 / budget).powf(1.0 / sf) - x).max(1.0).ceil();
    let terms = if wanted > cfg.max_series_terms as f64 {
        cfg.max_series_terms
    } else {
        wanted as usize
    };

    let rel = (3.0 * sf + 8.0) * UNIT_ROUNDOFF;
    let mut acc = ErrorSum::new();
    for k in (0..terms).rev() {
        let v = (1.0 / (x + k as f64)).powi(s as i32);
        acc.add(EvalResult::new(v, rel * v));
    }
    let hi = (x + terms as f64 - 1.0).powf(1.0 - sf) / (sf - 1.0);
    let lo = (x + terms as f64).powf(1.0 - sf) / (sf - 1.0);
    let tail_mid = 0.5 * (hi + lo);
    let tail_half = 0.5 * (hi - lo) + 4.0 * sf * UNIT_ROUNDOFF * hi;
    acc.add(EvalResult::new(tail_mid, tail_half));

    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let r = (fact * acc.result()).scale(sign);
    cfg.accept(r, terms)
}

/// Reference route for `ψ(x)`:
/// `ψ(x) = −γ + Σ_{k≥0} (x−1)/((k+1)(k+x))` with a bracketed tail.
pub fn digamma_series(x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    check_x(x)?;
    cfg.validate()?;
    let d = x - 1.0;
    let budget = cfg.target_abs_error;
    // bracket width ≈ |x−1|(|x−1|+1)/N²
    let wanted = ((2.0 * d.abs() * (d.abs() + 1.0) / budget).sqrt() + 2.0).ceil();
    let terms = (wanted.min(cfg.max_series_terms as f64) as usize).max(2);

    let mut acc = ErrorSum::new();
    for k in (0..terms).rev() {
        let kf = k as f64;
        let v = d / ((kf + 1.0) * (kf + x));
        acc.add(EvalResult::rounded(v, 5.0));
    }
    // Σ_{k≥N} 1/((k+1)(k+x)) lies between Σ 1/(k+c_hi)² and Σ 1/(k+c_lo)²,
    // which are bracketed by 1/(N+c) and 1/(N+c−1).
    let (c_lo, c_hi) = if x < 1.0 { (x, 1.0) } else { (1.0, x) };
    let nf = terms as f64;
    let t_lo = 1.0 / (nf + c_hi);
    let t_hi = 1.0 / (nf + c_lo - 1.0);
    let (a, b) = (d * t_lo, d * t_hi);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (a - b).abs() + 4.0 * UNIT_ROUNDOFF * a.abs().max(b.abs());
    acc.add(EvalResult::new(mid, half));
    acc.add(EvalResult::rounded(-EULER_GAMMA, 1.0));
    cfg.accept(acc.result(), terms)
}

/// `ψ⁽ⁿ⁾(x)` from its Laplace representation by adaptive quadrature.
///
/// The range is split at `t = 1`; on `(0, 1]` the factor `t/(1 − e^{−t})`
/// is evaluated through its Taylor series for small `t`.
pub fn polygamma_quadrature(n: u32, x: f64, cfg: &PrecisionConfig) -> Result<EvalResult> {
    check_x(x)?;
    cfg.validate()?;
    if n == 0 {
        return Err(Error::Domain("the Laplace form needs n >= 1".into()));
    }
    let nf = n as f64;
    let fact = factorial(n).value;
    let floor = fact * (1.0 / x).powi(n as i32 + 1);
    // stay well inside the caller's budget so the truncation and rounding
    // terms added below still fit
    let tol = 0.25 * cfg.budget_for(floor);

    let integrand = |t: f64| -> f64 {
        if t <= 0.0 {
            return if n == 1 { 1.0 } else { 0.0 };
        }
        t.powi(n as i32 - 1) * t_kappa_raw(t) * (-x * t).exp()
    };
    // For t ≥ T: tⁿ e^{−xt}/(1−e^{−t}) ≤ tⁿ e^{−xt}/(1−e^{−T}) and
    // ∫_T^∞ tⁿ e^{−xt} dt ≤ Tⁿ e^{−xT} / (x − n/T) when xT > n.
    let tail = |big_t: f64| -> f64 {
        let slope = x - nf / big_t;
        if slope <= 0.0 {
            return f64::INFINITY;
        }
        (nf * big_t.ln() - x * big_t).exp() / slope / (-(-big_t).exp_m1())
    };

    let head = quadrature::integrate(integrand, 0.0, 1.0, 0.5 * tol, quadrature::DEFAULT_MAX_INTERVALS)?;
    let rest = quadrature::integrate_semi_infinite(integrand, 1.0, tail, 0.5 * tol)?;
    let total = head + rest;
    let rounding = (nf + 12.0) * UNIT_ROUNDOFF * total.value.abs();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let r = EvalResult::new(sign * total.value, total.abs_error + rounding);
    cfg.accept(r, 0)
}

/// `|ψ⁽ⁿ⁻¹⁾(x+1) − ψ⁽ⁿ⁻¹⁾(x) − (−1)^{n−1}(n−1)!/xⁿ|` from two separate
/// evaluations.
pub fn recurrence_residual(n: u32, x: f64, cfg: &PrecisionConfig) -> Result<f64> {
    check_x(x)?;
    if n == 0 {
        return Err(Error::Domain("recurrence_residual needs n >= 1".into()));
    }
    let order = PolyOrder(n - 1);
    let lo = psi(order, x, cfg)?;
    let hi = psi(order, x + 1.0, cfg)?;
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let step = sign * factorial(n - 1).value / x.powi(n as i32);
    Ok((hi.value - lo.value - step).abs())
}
