use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{ErrorSum, EvalResult, UNIT_ROUNDOFF};

/// Polynomial in one variable with exact integer coefficients.
///
/// Stored sparsely; powers are distinct and zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(BigInt, u32)>", into = "Vec<(BigInt, u32)>")]
pub struct IntPolynomial {
    terms: BTreeMap<u32, BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: impl Into<BigInt>, power: u32) -> Self {
        Self::from_terms([(coeff.into(), power)])
    }

    /// Builds a polynomial from `(coefficient, power)` pairs, merging equal
    /// powers.
    pub fn from_terms<I: IntoIterator<Item = (BigInt, u32)>>(terms: I) -> Self {
        let mut map: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (c, p) in terms {
            *map.entry(p).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        IntPolynomial { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coefficient, power)` pairs in increasing power order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, u32)> {
        self.terms.iter().map(|(p, c)| (c, *p))
    }

    pub fn coefficient(&self, power: u32) -> BigInt {
        self.terms.get(&power).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_power(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    pub fn trailing_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().next()
    }

    /// Polynomial made of the terms whose coefficient has the given sign.
    pub fn part_with_sign(&self, positive: bool) -> IntPolynomial {
        IntPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.is_positive() == positive)
                .map(|(p, c)| (*p, c.clone()))
                .collect(),
        }
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(p, c)| c * x.pow(*p))
            .fold(BigInt::zero(), |a, b| a + b)
    }

    /// `Σ c_i x^{p_i + shift}` in floating point with an error bound.
    ///
    /// The shift lets callers evaluate `P(x) / x^E` without forming `x^E`.
    pub fn eval_scaled(&self, x: f64, shift: i32) -> Result<EvalResult> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("evaluation point {x} must be positive")));
        }
        let mut acc = ErrorSum::new();
        for (p, c) in &self.terms {
            let cf = c
                .to_f64()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Range(format!("coefficient {c} exceeds f64")))?;
            let e = *p as i32 + shift;
            let v = cf * x.powi(e);
            if !v.is_finite() {
                return Err(Error::Range(format!("term {c} x^{e} at x = {x}")));
            }
            let rel = (e.unsigned_abs() as f64 + 4.0) * UNIT_ROUNDOFF;
            acc.add(EvalResult::new(v, rel * v.abs()));
        }
        Ok(acc.result())
    }

    pub fn eval(&self, x: f64) -> Result<EvalResult> {
        self.eval_scaled(x, 0)
    }
}

impl From<Vec<(BigInt, u32)>> for IntPolynomial {
    fn from(v: Vec<(BigInt, u32)>) -> Self {
        IntPolynomial::from_terms(v)
    }
}

impl From<IntPolynomial> for Vec<(BigInt, u32)> {
    fn from(p: IntPolynomial) -> Self {
        p.terms.into_iter().map(|(p, c)| (c, p)).collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        IntPolynomial::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(p, c)| (c.clone(), *p)),
        )
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (pa, ca) in &self.terms {
            for (pb, cb) in &rhs.terms {
                out.push((ca * cb, pa + pb));
            }
        }
        IntPolynomial::from_terms(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match p {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}x")?,
                _ => write!(f, "{a}x^{p}")?,
            }
        }
        Ok(())
    }
}
