//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! Error estimates follow the QUADPACK rescaling of `|K21 - G10|`, floored
//! at `50 u` times the integral of `|f|`. The estimate is heuristic for
//! general integrands but reliable for the smooth, non-oscillatory ones
//! integrated in this crate.

use crate::error::{Error, Result};
use crate::eval::{EvalResult, UNIT_ROUNDOFF};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Default cap on the number of subintervals.
pub const DEFAULT_MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    result: f64,
    error: f64,
    /// Rounding floor of `error`; subdivision cannot push below it.
    floor: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let h = half.abs();
    let result = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * UNIT_ROUNDOFF * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * UNIT_ROUNDOFF) {
        err = err.max(floor);
    }
    Segment {
        a,
        b,
        result,
        error: err,
        floor,
    }
}

/// Integrates `f` over the finite interval `[a, b]` until the total error
/// estimate drops below `tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<EvalResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(EvalResult::exact(0.0));
    }
    let mut segs = vec![gk21(&f, a, b)];
    loop {
        let total_err: f64 = segs.iter().map(|s| s.error).sum();
        let total: f64 = segs.iter().map(|s| s.result).sum();
        let floor: f64 = segs.iter().map(|s| s.floor).sum();
        if !total.is_finite() {
            return Err(Error::Range(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        // a target below the rounding floor is met once the floor dominates
        if total_err <= tol.max(2.0 * floor) {
            return Ok(EvalResult::new(
                total,
                total_err + 2.0 * UNIT_ROUNDOFF * segs.len() as f64 * total.abs(),
            ));
        }
        if segs.len() >= max_intervals {
            return Err(Error::Quadrature {
                estimate: total_err,
                intervals: segs.len(),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty segment list");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Quadrature {
                estimate: total_err,
                intervals: segs.len() + 1,
            });
        }
        segs.push(gk21(&f, s.a, mid));
        segs.push(gk21(&f, mid, s.b));
    }
}

/// Integrates `f` over `[a, ∞)`.
///
/// `tail_bound(T)` must return a rigorous bound on `|∫_T^∞ f|`. The upper
/// limit is pushed out until the tail is below a tenth of `tol`; the
/// remaining budget goes to the finite part, split into unit-ratio pieces so
/// that exponentially decaying integrands are resolved.
pub fn integrate_semi_infinite<F, T>(f: F, a: f64, tail_bound: T, tol: f64) -> Result<EvalResult>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let tail_budget = 0.1 * tol;
    let mut upper = a.abs().max(1.0) * 2.0;
    let mut tail = tail_bound(upper);
    let mut steps = 0;
    while !(tail <= tail_budget) {
        upper *= 2.0;
        tail = tail_bound(upper);
        steps += 1;
        if steps > 200 {
            return Err(Error::Convergence {
                target: tail_budget,
                best_bound: tail,
                terms: steps,
            });
        }
    }

    // Geometric breakpoints keep each piece within a modest dynamic range.
    let mut pieces = Vec::new();
    let mut lo = a;
    let mut hi = if a > 0.0 { 2.0 * a } else { 1.0 };
    while hi < upper {
        pieces.push((lo, hi));
        lo = hi;
        hi *= 2.0;
    }
    pieces.push((lo, upper));

    let piece_tol = 0.9 * tol / pieces.len() as f64;
    let mut total = EvalResult::exact(0.0);
    for (lo, hi) in pieces {
        total = total + integrate(&f, lo, hi, piece_tol, DEFAULT_MAX_INTERVALS)?;
    }
    Ok(EvalResult::new(total.value, total.abs_error + tail))
}
