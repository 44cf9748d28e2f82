//! Floating values carrying an absolute error bound.
//!
//! Every arithmetic helper here adds the rounding error of the operation
//! itself (half an ulp relative to the result) on top of the propagated
//! input errors, so a chain of operations keeps a valid bound as long as
//! each input bound was valid.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Unit roundoff for `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

// Slack applied when an error bound is itself computed in floating point.
const BOUND_SLACK: f64 = 1.0 + 8.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error: f64,
}

impl EvalResult {
    pub fn new(value: f64, abs_error: f64) -> Self {
        debug_assert!(abs_error >= 0.0, "negative error bound {abs_error}");
        EvalResult {
            value,
            abs_error: abs_error * BOUND_SLACK,
        }
    }

    /// A value known exactly (no rounding was involved in producing it).
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            abs_error: 0.0,
        }
    }

    /// A value that is correctly rounded or close to it: error of a few ulps.
    pub fn rounded(value: f64, ulps: f64) -> Self {
        EvalResult::new(value, ulps * UNIT_ROUNDOFF * value.abs())
    }

    pub fn lower(&self) -> f64 {
        self.value - self.abs_error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.abs_error
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.abs_error.is_finite()
    }

    /// `true` when the value is certainly positive, i.e. `value > abs_error`.
    pub fn certainly_positive(&self) -> bool {
        self.value > self.abs_error
    }

    pub fn certainly_negative(&self) -> bool {
        -self.value > self.abs_error
    }

    /// Sign certified with a safety factor: `|value| > factor * abs_error`.
    pub fn certified_sign(&self, factor: f64) -> Option<i8> {
        if self.value.abs() > factor * self.abs_error && self.value != 0.0 {
            Some(if self.value > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }

    /// Whether the true value could equal `x`.
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.abs_error
    }

    pub fn abs(self) -> Self {
        EvalResult {
            value: self.value.abs(),
            abs_error: self.abs_error,
        }
    }

    /// Multiplication by a constant that is exactly representable.
    pub fn scale(self, c: f64) -> Self {
        let value = self.value * c;
        EvalResult::new(value, self.abs_error * c.abs() + UNIT_ROUNDOFF * value.abs())
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn recip(self) -> Self {
        let value = 1.0 / self.value;
        // |1/a - 1/b| <= δ / (|a| (|a| - δ)) for δ < |a|
        let denom = self.value.abs() * (self.value.abs() - self.abs_error);
        let prop = if denom > 0.0 {
            self.abs_error / denom
        } else {
            f64::INFINITY
        };
        EvalResult::new(value, prop + UNIT_ROUNDOFF * value.abs())
    }
}

impl Add for EvalResult {
    type Output = EvalResult;
    fn add(self, rhs: EvalResult) -> EvalResult {
        let value = self.value + rhs.value;
        EvalResult::new(
            value,
            self.abs_error + rhs.abs_error + UNIT_ROUNDOFF * value.abs(),
        )
    }
}

impl Sub for EvalResult {
    type Output = EvalResult;
    fn sub(self, rhs: EvalResult) -> EvalResult {
        self + (-rhs)
    }
}

impl Neg for EvalResult {
    type Output = EvalResult;
    fn neg(self) -> EvalResult {
        EvalResult {
            value: -self.value,
            abs_error: self.abs_error,
        }
    }
}

impl Mul for EvalResult {
    type Output = EvalResult;
    fn mul(self, rhs: EvalResult) -> EvalResult {
        let value = self.value * rhs.value;
        let prop = self.value.abs() * rhs.abs_error
            + rhs.value.abs() * self.abs_error
            + self.abs_error * rhs.abs_error;
        EvalResult::new(value, prop + UNIT_ROUNDOFF * value.abs())
    }
}

impl Add<f64> for EvalResult {
    type Output = EvalResult;
    fn add(self, rhs: f64) -> EvalResult {
        self + EvalResult::exact(rhs)
    }
}

impl Sub<f64> for EvalResult {
    type Output = EvalResult;
    fn sub(self, rhs: f64) -> EvalResult {
        self + EvalResult::exact(-rhs)
    }
}

/// Neumaier compensated accumulator with a running rigorous error bound.
///
/// The bound covers the compensated summation rounding,
/// `2u|s| + 2n u² Σ|x_i|`, plus the declared errors of the summands.
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
    carried: f64,
    count: usize,
}

impl ErrorSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_value(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        self.count += 1;
    }

    pub fn add(&mut self, x: EvalResult) {
        self.add_value(x.value);
        self.carried += x.abs_error;
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    pub fn result(&self) -> EvalResult {
        let value = self.sum + self.comp;
        EvalResult::new(
            value,
            self.carried
                + 2.0 * UNIT_ROUNDOFF * value.abs()
                + 2.0 * (self.count as f64) * UNIT_ROUNDOFF * UNIT_ROUNDOFF * self.abs_sum,
        )
    }
}

impl FromIterator<EvalResult> for ErrorSum {
    fn from_iter<I: IntoIterator<Item = EvalResult>>(iter: I) -> Self {
        let mut acc = ErrorSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
