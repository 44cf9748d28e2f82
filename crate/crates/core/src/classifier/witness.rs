//! Certified witnesses that `f_{m,2ν}` changes sign and is not monotonic.
//!
//! The search scans a log-spaced grid for two certified values of opposite
//! sign, then bisects the bracket in log space while the midpoint keeps a
//! certified sign.

use serde::{Deserialize, Serialize};

use super::asymptotics::predicted_sign;
use crate::cm_engine::{f_derivative, FamilyIndex};
use crate::error::{Error, Result};
use crate::eval::EvalResult;
use crate::grid::log_grid;
use crate::kernels::Endpoint;
use crate::polygamma::PrecisionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub scan_points: usize,
    /// Bisection stops once `hi / lo − 1` falls below this.
    pub rel_width: f64,
    pub max_refinements: u32,
    /// A value counts only when `|value| > margin_factor · abs_error`.
    pub margin_factor: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            x_min: 1e-3,
            x_max: 1e3,
            scan_points: 128,
            rel_width: 1e-6,
            max_refinements: 64,
            margin_factor: 10.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > 0.0 && self.x_min < self.x_max && self.x_max.is_finite()) {
            return Err(Error::Domain(format!(
                "search interval [{}, {}] must satisfy 0 < x_min < x_max",
                self.x_min, self.x_max
            )));
        }
        if self.scan_points < 2 {
            return Err(Error::Domain("search needs at least two scan points".into()));
        }
        if !(self.margin_factor >= 1.0 && self.rel_width > 0.0) {
            return Err(Error::Domain("margin factor must be >= 1 and width positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WitnessKind {
    /// `f(x_pos) > 0 > f(x_neg)`.
    SignChange { x_pos: f64, x_neg: f64 },
    /// `f'(x_up) > 0 > f'(x_down)`.
    NonMonotonic { x_up: f64, x_down: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub x: f64,
    pub value: EvalResult,
}

impl WitnessPoint {
    /// `|value| / abs_error`.
    pub fn margin(&self) -> f64 {
        if self.value.abs_error > 0.0 {
            self.value.value.abs() / self.value.abs_error
        } else {
            f64::INFINITY
        }
    }
}

/// Signs expected near `0⁺` and `∞` from the leading asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedSigns {
    pub zero: Option<i8>,
    pub infinity: Option<i8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: FamilyIndex,
    pub kind: WitnessKind,
    pub positive: WitnessPoint,
    pub negative: WitnessPoint,
    pub margin_factor: f64,
    pub predicted: PredictedSigns,
    pub refinements: u32,
}

impl Witness {
    /// Smaller of the two certification ratios `|value| / abs_error`.
    pub fn margin(&self) -> f64 {
        self.positive.margin().min(self.negative.margin())
    }

    /// Whether both cited values clear the margin with opposite signs.
    pub fn is_certified(&self) -> bool {
        self.positive.value.certified_sign(self.margin_factor) == Some(1)
            && self.negative.value.certified_sign(self.margin_factor) == Some(-1)
    }
}

fn check_index(m: u32, even_n: u32) -> Result<FamilyIndex> {
    let idx = FamilyIndex::new(m, even_n)?;
    if !even_n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "witness search needs an even second index, got {even_n}"
        )));
    }
    if m == 1 && even_n == 2 {
        return Err(Error::Domain(
            "f_{1,2} is completely monotonic; no witness exists".into(),
        ));
    }
    Ok(idx)
}

fn predicted(m: u32, nu: u32, derivative: bool) -> Result<PredictedSigns> {
    let flip = |s: Option<i8>| if derivative { s.map(|v| -v) } else { s };
    Ok(PredictedSigns {
        zero: flip(predicted_sign(m, nu, Endpoint::Zero)?),
        infinity: flip(predicted_sign(m, nu, Endpoint::Infinity)?),
    })
}

struct Bracket {
    positive: WitnessPoint,
    negative: WitnessPoint,
    refinements: u32,
}

fn search<F>(idx: FamilyIndex, eval: F, hint: PredictedSigns, s: &SearchConfig) -> Result<Bracket>
where
    F: Fn(f64) -> Result<EvalResult>,
{
    s.validate()?;
    let grid = log_grid(s.x_min, s.x_max, s.scan_points)?;
    let mut scan = Vec::with_capacity(grid.len());
    for &x in &grid {
        let v = eval(x)?;
        scan.push((x, v, v.certified_sign(s.margin_factor)));
    }
    let certified: Vec<usize> = (0..scan.len()).filter(|&i| scan[i].2.is_some()).collect();

    // adjacent certified points of opposite sign; prefer a transition that
    // matches the asymptotic prediction
    let transitions: Vec<(usize, usize)> = certified
        .windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|&(a, b)| scan[a].2 != scan[b].2)
        .collect();
    let wanted = match (hint.zero, hint.infinity) {
        (Some(z), Some(i)) if z != i => Some(z),
        _ => None,
    };
    let &(a, b) = transitions
        .iter()
        .find(|&&(a, _)| Some(scan[a].2.unwrap()) == wanted)
        .or_else(|| transitions.first())
        .ok_or_else(|| Error::SearchExhausted {
            m: idx.m,
            n: idx.n,
            reason: format!(
                "no certified sign transition among {} scan points in [{}, {}]",
                s.scan_points, s.x_min, s.x_max
            ),
        })?;

    let mut lo = WitnessPoint { x: scan[a].0, value: scan[a].1 };
    let mut hi = WitnessPoint { x: scan[b].0, value: scan[b].1 };
    let lo_sign = scan[a].2.unwrap();
    let mut refinements = 0;
    while hi.x / lo.x - 1.0 > s.rel_width && refinements < s.max_refinements {
        let mid = (lo.x * hi.x).sqrt();
        let v = eval(mid)?;
        match v.certified_sign(s.margin_factor) {
            Some(sign) if sign == lo_sign => lo = WitnessPoint { x: mid, value: v },
            Some(_) => hi = WitnessPoint { x: mid, value: v },
            None => break,
        }
        refinements += 1;
    }
    let (positive, negative) = if lo_sign > 0 { (lo, hi) } else { (hi, lo) };
    Ok(Bracket {
        positive,
        negative,
        refinements,
    })
}

/// Points `x_pos`, `x_neg` with `f_{m,n}(x_pos) > 0 > f_{m,n}(x_neg)`, both
/// certified. `even_n` is the full second index.
pub fn find_sign_change(
    m: u32,
    even_n: u32,
    s: &SearchConfig,
    cfg: &PrecisionConfig,
) -> Result<Witness> {
    let idx = check_index(m, even_n)?;
    let hint = predicted(m, even_n / 2, false)?;
    let b = search(idx, |x| f_derivative(idx, 0, x, cfg), hint, s)?;
    Ok(Witness {
        index: idx,
        kind: WitnessKind::SignChange {
            x_pos: b.positive.x,
            x_neg: b.negative.x,
        },
        positive: b.positive,
        negative: b.negative,
        margin_factor: s.margin_factor,
        predicted: hint,
        refinements: b.refinements,
    })
}

/// Points where `f'_{m,n}` is certified positive and certified negative.
pub fn find_nonmonotonic(
    m: u32,
    even_n: u32,
    s: &SearchConfig,
    cfg: &PrecisionConfig,
) -> Result<Witness> {
    let idx = check_index(m, even_n)?;
    let hint = predicted(m, even_n / 2, true)?;
    let b = search(idx, |x| f_derivative(idx, 1, x, cfg), hint, s)?;
    Ok(Witness {
        index: idx,
        kind: WitnessKind::NonMonotonic {
            x_up: b.positive.x,
            x_down: b.negative.x,
        },
        positive: b.positive,
        negative: b.negative,
        margin_factor: s.margin_factor,
        predicted: hint,
        refinements: b.refinements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_indices() {
        let s = SearchConfig::default();
        let cfg = PrecisionConfig::default();
        assert!(find_sign_change(1, 2, &s, &cfg).is_err());
        assert!(find_sign_change(2, 3, &s, &cfg).is_err());
        assert!(find_nonmonotonic(0, 2, &s, &cfg).is_err());
    }

    #[test]
    fn two_two_sign_change() {
        let w = find_sign_change(2, 2, &SearchConfig::default(), &PrecisionConfig::default())
            .unwrap();
        assert!(w.is_certified());
        let WitnessKind::SignChange { x_pos, x_neg } = w.kind else {
            panic!("wrong kind")
        };
        assert!(x_pos < x_neg);
        assert!((x_neg / x_pos - 1.0) < 1e-5);
    }

    #[test]
    fn narrow_interval_exhausts() {
        let s = SearchConfig {
            x_min: 5.0,
            x_max: 10.0,
            ..SearchConfig::default()
        };
        let r = find_sign_change(2, 2, &s, &PrecisionConfig::default());
        assert!(matches!(r, Err(Error::SearchExhausted { .. })));
    }
}
