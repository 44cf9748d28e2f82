//! Two-sided elementary bounds for `ψ` and `ψ⁽ᵏ⁾`:
//!
//! * `ln x − 1/x < ψ(x) < ln x − 1/(2x)`
//! * `(k−1)!/xᵏ + k!/(2xᵏ⁺¹) < (−1)ᵏ⁺¹ψ⁽ᵏ⁾(x) < (k−1)!/xᵏ + k!/xᵏ⁺¹`
//!
//! A check passes only when both margins exceed twice the error bound of
//! the middle term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{EvalResult, UNIT_ROUNDOFF};
use crate::exec::Execution;
use crate::polygamma::{digamma, factorial, polygamma, PrecisionConfig};

/// Margins must exceed this multiple of the middle term's error bound.
pub const MARGIN_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityResult {
    /// `0` for the `ψ` bounds, otherwise the polygamma order.
    pub k: u32,
    pub x: f64,
    pub lower: EvalResult,
    pub middle: EvalResult,
    pub upper: EvalResult,
    /// `(middle − lower, upper − middle)`.
    pub margins: (EvalResult, EvalResult),
}

impl InequalityResult {
    fn build(k: u32, x: f64, lower: EvalResult, middle: EvalResult, upper: EvalResult) -> Self {
        InequalityResult {
            k,
            x,
            lower,
            middle,
            upper,
            margins: (middle - lower, upper - middle),
        }
    }

    fn clears(m: &EvalResult) -> bool {
        m.value > MARGIN_FACTOR * m.abs_error
    }

    pub fn lower_holds(&self) -> bool {
        Self::clears(&self.margins.0)
    }

    pub fn upper_holds(&self) -> bool {
        Self::clears(&self.margins.1)
    }

    pub fn passed(&self) -> bool {
        self.lower_holds() && self.upper_holds()
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} must be positive and finite")))
    }
}

pub fn psi_log_bounds_check(x: f64, cfg: &PrecisionConfig) -> Result<InequalityResult> {
    check_x(x)?;
    let middle = digamma(x, cfg)?;
    let ln = EvalResult::rounded(x.ln(), 1.0);
    let inv = EvalResult::rounded(1.0 / x, 0.5);
    let lower = ln - inv;
    let upper = ln - inv.scale(0.5);
    Ok(InequalityResult::build(0, x, lower, middle, upper))
}

pub fn polygamma_bounds_check(k: u32, x: f64, cfg: &PrecisionConfig) -> Result<InequalityResult> {
    check_x(x)?;
    if k == 0 {
        return Err(Error::Domain("polygamma bounds need k >= 1".into()));
    }
    let raw = polygamma(k, x, cfg)?;
    let middle = if k % 2 == 1 { raw } else { -raw };
    let pow = |e: u32| {
        let v = x.powi(-(e as i32));
        if v.is_finite() {
            Ok(EvalResult::new(v, (e as f64 + 2.0) * UNIT_ROUNDOFF * v))
        } else {
            Err(Error::Range(format!("x^-{e} at x = {x}")))
        }
    };
    let first = factorial(k - 1) * pow(k)?;
    let second = factorial(k) * pow(k + 1)?;
    let lower = first + second.scale(0.5);
    let upper = first + second;
    Ok(InequalityResult::build(k, x, lower, middle, upper))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsSummary {
    pub k_max: u32,
    pub grid: Vec<f64>,
    /// `ψ` bounds first, then `k = 1..=k_max`, each over the whole grid.
    pub results: Vec<InequalityResult>,
    pub failures: Vec<InequalityResult>,
    /// Smallest `margin / abs_error` over all lower and upper margins.
    pub min_lower_ratio: f64,
    pub min_upper_ratio: f64,
}

impl BoundsSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn ratio(m: &EvalResult) -> f64 {
    if m.abs_error > 0.0 {
        m.value / m.abs_error
    } else if m.value > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// Runs the `ψ` bounds and the `ψ⁽ᵏ⁾` bounds for `k = 1..=k_max` at every
/// grid point.
pub fn bounds_suite(
    k_max: u32,
    grid: &[f64],
    cfg: &PrecisionConfig,
    exec: Execution,
) -> Result<BoundsSummary> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let jobs: Vec<(u32, f64)> = (0..=k_max)
        .flat_map(|k| grid.iter().map(move |&x| (k, x)))
        .collect();
    let results = exec
        .map(&jobs, |&(k, x)| {
            if k == 0 {
                psi_log_bounds_check(x, cfg)
            } else {
                polygamma_bounds_check(k, x, cfg)
            }
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let failures = results.iter().filter(|r| !r.passed()).copied().collect();
    let min_lower_ratio = results
        .iter()
        .map(|r| ratio(&r.margins.0))
        .fold(f64::INFINITY, f64::min);
    let min_upper_ratio = results
        .iter()
        .map(|r| ratio(&r.margins.1))
        .fold(f64::INFINITY, f64::min);
    Ok(BoundsSummary {
        k_max,
        grid: grid.to_vec(),
        results,
        failures,
        min_lower_ratio,
        min_upper_ratio,
    })
}
