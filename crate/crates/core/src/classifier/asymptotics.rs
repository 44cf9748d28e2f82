//! Leading-order behaviour of `f_{m,2ν}` at `0⁺` and `∞`, and the integer
//! quantities that decide its sign.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::bounds::fact;
use super::poly::IntPolynomial;
use crate::cm_engine::FamilyIndex;
use crate::error::{Error, Result};
use crate::eval::{EvalResult, UNIT_ROUNDOFF};
use crate::kernels::Endpoint;

/// Sign of the dominant term of `poly` as `x → 0⁺` (lowest power) or
/// `x → ∞` (highest power).
pub fn leading_term_sign(poly: &IntPolynomial, end: Endpoint) -> Result<i8> {
    let c = match end {
        Endpoint::Zero => poly.trailing_coefficient(),
        Endpoint::Infinity => poly.leading_coefficient(),
    }
    .ok_or_else(|| Error::Domain("zero polynomial has no leading term".into()))?;
    Ok(if c.is_positive() { 1 } else { -1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinomCase {
    /// `i = m = 1`, value exactly 1.
    Unit,
    /// `2i − 1 < m`, value 0.
    Vanishing,
    /// `i ≥ 2` and `2i − 1 ≥ m`, value at least 2.
    AtLeastTwo,
}

/// `i · C(2i−1, m)` together with the case it falls in.
pub fn binom_quantity(i: u32, m: u32) -> Result<(BigInt, BinomCase)> {
    if i == 0 || m == 0 {
        return Err(Error::Domain(format!("need i, m >= 1, got ({i}, {m})")));
    }
    let top = 2 * i - 1;
    let c = if m > top {
        BigInt::from(0)
    } else {
        fact(top) / (fact(m) * fact(top - m))
    };
    let value = BigInt::from(i) * c;
    let case = if i == 1 && m == 1 {
        BinomCase::Unit
    } else if top < m {
        BinomCase::Vanishing
    } else {
        BinomCase::AtLeastTwo
    };
    Ok((value, case))
}

/// `1 − m · C(2m−1, m−1)`, the bracket of the `m = ν` envelope at infinity.
pub fn discriminant_mn(m: u32) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::Domain("need m >= 1".into()));
    }
    let c = fact(2 * m - 1) / (fact(m - 1) * fact(m));
    Ok(BigInt::from(1) - BigInt::from(m) * c)
}

fn factorial_f64(n: u32) -> Result<f64> {
    fact(n)
        .to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Range(format!("{n}! exceeds f64")))
}

/// Leading asymptotic form of `f_{m,2ν}`:
///
/// * at infinity `[(m−1)!]²/x^{2m} · {1 − (2ν−1)!/[(m−1)!]² · x^{2(m−ν)}}`
/// * at zero `(m!)²/x^{2m+2} · {1 − (2ν)!/(m!)² · x^{2(m−ν)+1}}`
///
/// `idx.n` is the full second index `2ν` and must be even.
pub fn envelope(idx: FamilyIndex, x: f64, end: Endpoint) -> Result<EvalResult> {
    FamilyIndex::new(idx.m, idx.n)?;
    if !idx.n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "envelope is defined for even second index, got {}",
            idx.n
        )));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x = {x} must be positive")));
    }
    let m = idx.m;
    let nu = idx.n / 2;
    // expanded: square term minus the polygamma term
    let (sq_coeff, sq_pow, lin_coeff, lin_pow) = match end {
        Endpoint::Infinity => {
            let a = factorial_f64(m - 1)?;
            (a * a, 2 * m as i32, factorial_f64(2 * nu - 1)?, 2 * nu as i32)
        }
        Endpoint::Zero => {
            let a = factorial_f64(m)?;
            (a * a, 2 * m as i32 + 2, factorial_f64(2 * nu)?, 2 * nu as i32 + 1)
        }
    };
    let sq = sq_coeff * x.powi(-sq_pow);
    let lin = lin_coeff * x.powi(-lin_pow);
    if !(sq.is_finite() && lin.is_finite()) {
        return Err(Error::Range(format!(
            "envelope of f_{{{},{}}} overflows at x = {x}",
            idx.m, idx.n
        )));
    }
    let sq = EvalResult::new(sq, (sq_pow as f64 + 4.0) * UNIT_ROUNDOFF * sq.abs());
    let lin = EvalResult::new(lin, (lin_pow as f64 + 4.0) * UNIT_ROUNDOFF * lin.abs());
    Ok(sq - lin)
}

/// Sign the envelope predicts for `f_{m,2ν}` near the given end, or `None`
/// when the leading coefficients cancel (only `m = ν = 1` at infinity).
pub fn predicted_sign(m: u32, nu: u32, end: Endpoint) -> Result<Option<i8>> {
    if m == 0 || nu == 0 {
        return Err(Error::Domain("need m, ν >= 1".into()));
    }
    let s = match end {
        Endpoint::Infinity => {
            if m > nu {
                -1
            } else if m < nu {
                1
            } else {
                let d = discriminant_mn(m)?;
                if d.is_positive() {
                    1
                } else if d.is_negative() {
                    -1
                } else {
                    return Ok(None);
                }
            }
        }
        // power 2(m−ν)+1 is never zero; negative exponent means the
        // polygamma term dominates near zero
        Endpoint::Zero => {
            if m >= nu {
                1
            } else {
                -1
            }
        }
    };
    Ok(Some(s))
}
