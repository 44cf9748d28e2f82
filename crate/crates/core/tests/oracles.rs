//! Reference values computed independently at 30 significant digits and
//! frozen here, plus cross-checks between independent evaluation routes.

use polycm::cm_engine::{f_derivative, f_value, FamilyIndex};
use polycm::kernels::{h, kappa, omega, tanh_kernel};
use polycm::polygamma::{
    digamma, digamma_series, polygamma, polygamma_quadrature, polygamma_series, EULER_GAMMA,
    EULER_GAMMA_DIGITS,
};
use polycm::{ErrorSum, EvalResult, PrecisionConfig};

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

/// `|r − expected| ≤ r.abs_error + slack·|expected|`; the slack covers the
/// rounding of the 30-digit reference to a double.
fn close(r: EvalResult, expected: f64) {
    let slack = 2.0 * f64::EPSILON * expected.abs();
    assert!(
        (r.value - expected).abs() <= r.abs_error + slack,
        "{r:?} vs {expected:e}"
    );
}

#[test]
fn euler_gamma_constant_matches_slow_series() {
    // γ = H_n − ln n − 1/(2n) + 1/(12n²) − ε with 0 < ε < 1/(120 n⁴)
    let n = 2000u32;
    let harmonic: ErrorSum = (1..=n).rev().map(|k| EvalResult::rounded(1.0 / k as f64, 0.5)).collect();
    let nf = n as f64;
    let est = harmonic.result().value - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf);
    let tail = 1.0 / (120.0 * nf.powi(4));
    assert!(est - EULER_GAMMA >= -1e-14 && est - EULER_GAMMA <= tail + 1e-14);

    let digits = EULER_GAMMA_DIGITS.trim_start_matches("0.");
    assert!(digits.len() >= 30);
    assert!(EULER_GAMMA_DIGITS.starts_with("0.577215664901532860606512090082"));
    assert_eq!(EULER_GAMMA_DIGITS.parse::<f64>().unwrap(), EULER_GAMMA);
}

#[test]
fn digamma_reference_values() {
    close(digamma(1.0, &cfg()).unwrap(), -0.577_215_664_901_532_9);
    close(digamma(0.5, &cfg()).unwrap(), -1.963_510_026_021_423_5);
    close(digamma(2.0, &cfg()).unwrap(), 0.422_784_335_098_467_13);
    close(digamma(10.0, &cfg()).unwrap(), 2.251_752_589_066_721);
    for x in [0.5, 1.0, 2.0, 10.0] {
        let a = digamma(x, &cfg()).unwrap();
        let b = digamma_series(x, &cfg()).unwrap();
        assert!((a.value - b.value).abs() <= a.abs_error + b.abs_error);
        assert!(a.abs_error <= 1e-12);
    }
}

#[test]
fn polygamma_reference_values() {
    close(polygamma(1, 1.0, &cfg()).unwrap(), 1.644_934_066_848_226_4);
    close(polygamma(2, 1.0, &cfg()).unwrap(), -2.404_113_806_319_188_5);
    close(polygamma(3, 0.5, &cfg()).unwrap(), 97.409_091_034_002_44);
    close(polygamma(6, 10.0, &cfg()).unwrap(), -1.601_508_710_767_886e-4);
    close(polygamma(1, 50.0, &cfg()).unwrap(), 0.020_201_333_226_697_125);
    close(polygamma(7, 1.0, &cfg()).unwrap(), 5_060.549_875_237_64);
}

#[test]
fn three_routes_agree() {
    for n in 1..=8 {
        for x in [0.5, 1.0, 2.0, 10.0] {
            let main = polygamma(n, x, &cfg()).unwrap();
            let series = polygamma_series(n, x, &cfg()).unwrap();
            let quad = polygamma_quadrature(n, x, &cfg()).unwrap();
            for other in [series, quad] {
                assert!(
                    (main.value - other.value).abs() <= main.abs_error + other.abs_error,
                    "n={n} x={x}: {main:?} vs {other:?}"
                );
            }
        }
    }
}

#[test]
fn family_reference_values() {
    let f12 = FamilyIndex::new(1, 2).unwrap();
    let f22 = FamilyIndex::new(2, 2).unwrap();
    close(f_value(f12, 1.0, &cfg()).unwrap(), 0.301_694_277_958_656_9);
    close(f_value(f22, 1.0, &cfg()).unwrap(), 3.375_649_387_415_348_4);
    close(f_value(f22, 3.0, &cfg()).unwrap(), -0.130_362_741_021_000_2);
    close(f_value(FamilyIndex::new(3, 5).unwrap(), 0.7, &cfg()).unwrap(), 1_695.058_742_221_938_5);
    close(f_derivative(f12, 1, 1.0, &cfg()).unwrap(), -1.415_277_998_922_355_4);
    close(f_derivative(f12, 1, 2.0, &cfg()).unwrap(), -0.027_314_118_891_072_436);
    close(f_value(f12, 1002.0, &cfg()).unwrap(), 8.283_512_288_882_611e-14);
}

#[test]
fn kernel_reference_values() {
    close(h(1, 1.0).unwrap(), 1.081_976_706_869_326_5);
    close(omega(1.0).unwrap(), -0.850_918_128_239_321_6);
    close(tanh_kernel(2.0).unwrap(), 0.313_035_285_499_331_3);
    close(omega(50.0).unwrap(), -1.928_749_847_963_917_8e-20);
    close(kappa(std::f64::consts::LN_2).unwrap(), 2.0);
}
