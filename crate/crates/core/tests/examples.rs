use num_bigint::BigInt;
use polycm::classifier::asymptotics::{binom_quantity, envelope, leading_term_sign, BinomCase};
use polycm::classifier::bounds::{
    bound_check, p_derived, p_printed, q_derived, q_derived_parts, q_printed, q_printed_parts,
    BoundKind, BoundStatus,
};
use polycm::classifier::{
    classify, find_nonmonotonic, find_sign_change, ClassifyOptions, Evidence, SearchConfig,
    Verdict, WitnessKind,
};
use polycm::cm_engine::{
    cm_check, f_derivative, f_value, finite_difference_crosscheck, shift_difference_kernel_check,
    telescoping_check, CmVerdict, FamilyIndex,
};
use polycm::grid::{log_grid, GridSpec};
use polycm::inequalities::{bounds_suite, polygamma_bounds_check, psi_log_bounds_check};
use polycm::kernels::{
    h, kappa, kernel_report, laplace_power_identity, omega, tanh_kernel, Endpoint, KernelId,
    Monotonicity,
};
use polycm::polygamma::{digamma, polygamma, polygamma_quadrature, recurrence_residual};
use polycm::{Error, Execution, PrecisionConfig};

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

fn idx(m: u32, n: u32) -> FamilyIndex {
    FamilyIndex::new(m, n).unwrap()
}

// polygamma

#[test]
fn digamma_shift_by_one() {
    let a = digamma(1.0, &cfg()).unwrap();
    let b = digamma(2.0, &cfg()).unwrap();
    assert!((b.value - a.value - 1.0).abs() <= a.abs_error + b.abs_error + 1e-15);
}

#[test]
fn digamma_within_log_bounds_at_large_x() {
    let x = 1e6;
    let r = digamma(x, &cfg()).unwrap();
    assert!(r.lower() > x.ln() - 1.0 / x && r.upper() < x.ln() - 0.5 / x);
}

#[test]
fn polygamma_sign_and_errors() {
    assert!(polygamma(3, 0.5, &cfg()).unwrap().certainly_positive());
    assert!(matches!(digamma(0.0, &cfg()), Err(Error::Domain(_))));
    assert!(matches!(polygamma(2, -1.0, &cfg()), Err(Error::Domain(_))));
}

#[test]
fn quadrature_route_examples() {
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let q = polygamma_quadrature(1, 1.0, &cfg()).unwrap();
    assert!(rel(q.value, polygamma(1, 1.0, &cfg()).unwrap().value) <= 1e-9);
    let q = polygamma_quadrature(6, 10.0, &cfg()).unwrap();
    assert!(rel(q.value, polygamma(6, 10.0, &cfg()).unwrap().value) <= 1e-9);
    let x: f64 = 50.0;
    let q = polygamma_quadrature(1, x, &cfg()).unwrap();
    assert!(q.lower() > 1.0 / x + 0.5 / (x * x) && q.upper() < 1.0 / x + 1.0 / (x * x));
}

#[test]
fn recurrence_examples() {
    assert!(recurrence_residual(2, 1.0, &cfg()).unwrap() <= 1e-11);
    assert!(recurrence_residual(1, 3.0, &cfg()).unwrap() <= 1e-11);
    assert!(recurrence_residual(5, 0.25, &cfg()).unwrap() <= 1e-10);
}

// kernels

#[test]
fn kernel_point_examples() {
    let t = 1e-8;
    assert!((kappa(t).unwrap().value * t - 1.0).abs() <= 1e-6);
    assert!((kappa(50.0).unwrap().value - 1.0).abs() <= 1e-12);
    assert!((h(-1, 1e-6).unwrap().value - 1.0).abs() <= 1e-5);
    assert!((h(0, 50.0).unwrap().value - 0.5).abs() <= 1e-12);
    let h1 = h(1, 1.0).unwrap();
    assert!((h1.value - (kappa(1.0).unwrap().value - 0.5)).abs() <= 1e-15);
    assert!((omega(1e-8).unwrap().value + 1.0).abs() <= 1e-6);
    let t = 1e-6;
    assert!((tanh_kernel(t).unwrap().value - t * t / 12.0).abs() <= 1e-18);
    assert!(matches!(omega(0.0), Err(Error::Domain(_))));
    assert!(matches!(h(2, -1.0), Err(Error::Domain(_))));
}

#[test]
fn kernel_reports_on_wide_grid() {
    let grid = log_grid(1e-6, 50.0, 64).unwrap();
    let om = kernel_report(KernelId::Omega, &grid).unwrap();
    assert_eq!(om.monotonicity_verdict, Monotonicity::Increasing);
    assert!(om.limit_checks.iter().all(|c| c.passed));
    let h0 = kernel_report(KernelId::H(0), &grid).unwrap();
    assert_eq!(h0.monotonicity_verdict, Monotonicity::Decreasing);
    assert!(h0.range_check.passed);
    let hm1 = kernel_report(KernelId::H(-1), &grid).unwrap();
    assert_eq!(hm1.monotonicity_verdict, Monotonicity::Increasing);
    assert!(hm1.range_check.passed);
}

#[test]
fn laplace_identity_contract() {
    for r in [1.0, 2.0, 5.5] {
        for x in [0.5, 1.0, 10.0] {
            assert!(laplace_power_identity(r, x).unwrap() <= 1e-9, "r={r} x={x}");
        }
    }
    assert!(laplace_power_identity(1.0, 2.0).unwrap() <= 1e-10);
    assert!(laplace_power_identity(2.0, 1.0).unwrap() <= 1e-10);
}

// cm_engine

#[test]
fn derivative_examples() {
    let f12 = idx(1, 2);
    assert_eq!(f_derivative(f12, 0, 1.0, &cfg()).unwrap(), f_value(f12, 1.0, &cfg()).unwrap());
    assert!(f_derivative(f12, 1, 1.0, &cfg()).unwrap().certainly_negative());
    // f'_{m,2n} = 2ψ⁽ᵐ⁾ψ⁽ᵐ⁺¹⁾ + ψ⁽²ⁿ⁺¹⁾
    for (m, n, x) in [(2, 1, 0.7), (3, 2, 4.0), (1, 3, 1.5)] {
        let d = f_derivative(idx(m, 2 * n), 1, x, &cfg()).unwrap();
        let a = polygamma(m, x, &cfg()).unwrap();
        let b = polygamma(m + 1, x, &cfg()).unwrap();
        let c = polygamma(2 * n + 1, x, &cfg()).unwrap();
        let direct = (a * b).scale(2.0) + c;
        assert!((d.value - direct.value).abs() <= d.abs_error + direct.abs_error);
    }
}

#[test]
fn finite_difference_examples() {
    assert!(finite_difference_crosscheck(idx(1, 2), 1, 2.0, 1e-4, &cfg()).unwrap() <= 1e-6);
    assert!(finite_difference_crosscheck(idx(2, 3), 2, 1.5, 1e-3, &cfg()).unwrap() <= 1e-4);
    assert!(finite_difference_crosscheck(idx(1, 1), 3, 3.0, 1e-2, &cfg()).unwrap() <= 1e-3);
}

#[test]
fn cm_check_examples() {
    let grid = GridSpec::standard().points().unwrap();
    let r = cm_check(idx(1, 2), 8, &grid, &cfg(), Execution::Parallel).unwrap();
    assert_eq!(r.verdict, CmVerdict::ConsistentWithCm);
    let r = cm_check(idx(3, 5), 6, &grid, &cfg(), Execution::Parallel).unwrap();
    assert_eq!(r.verdict, CmVerdict::ConsistentWithCm);
    let r = cm_check(idx(2, 2), 0, &[1.0, 3.0], &cfg(), Execution::Sequential).unwrap();
    match r.verdict {
        CmVerdict::Violation { order, x, .. } => assert_eq!((order, x), (0, 3.0)),
        v => panic!("expected a violation, got {v:?}"),
    }
}

#[test]
fn order_cap_is_a_capability_error() {
    let r = cm_check(idx(1, 2), 70, &[1.0], &cfg(), Execution::Sequential);
    assert!(matches!(r, Err(Error::Capability { .. })));
}

#[test]
fn telescoping_examples() {
    let r = telescoping_check(10, &[1.0], &cfg(), Execution::Sequential).unwrap();
    assert!(r.max_residual() <= 1e-10);
    let r = telescoping_check(1000, &[0.5, 1.0], &cfg(), Execution::Sequential).unwrap();
    for e in &r.entries {
        assert!(e.remainder_decreasing);
    }
    let one = &r.entries[1];
    assert!(one.remainders.iter().find(|(n, _)| *n == 1000).unwrap().1 < 1e-5);
}

#[test]
fn shift_difference_examples() {
    assert!(shift_difference_kernel_check(1.0, &cfg()).unwrap() <= 1e-8);
    assert!(shift_difference_kernel_check(5.0, &cfg()).unwrap() <= 1e-9);
    assert!(shift_difference_kernel_check(0.5, &cfg()).unwrap() <= 1e-7);
}

// classifier

fn coeffs(p: &polycm::classifier::IntPolynomial) -> Vec<(i64, u32)> {
    p.terms().map(|(c, e)| (i64::try_from(c).unwrap(), e)).collect()
}

#[test]
fn printed_polynomials() {
    assert_eq!(coeffs(&q_printed(1, 1).unwrap()), vec![(-4, 2), (2, 4)]);
    assert_eq!(coeffs(&q_printed(1, 2).unwrap()), vec![(120, 3), (44, 4), (-6, 5), (-2, 6)]);
    let q21 = q_printed(2, 1).unwrap();
    assert_eq!((q21.degree(), q21.leading_coefficient().cloned()), (Some(6), Some(BigInt::from(4))));
    assert_eq!(coeffs(&p_printed(1, 1).unwrap()), vec![(-2, 2), (18, 3), (4, 4)]);
    let p12 = p_printed(1, 2).unwrap();
    assert_eq!(p12.degree(), Some(6));
    assert_eq!(p12.leading_coefficient(), Some(&BigInt::from(-4)));
    let p21 = p_printed(2, 1).unwrap();
    assert_eq!(p21.lowest_power(), Some(2));
    assert!(p21.trailing_coefficient().unwrap() < &BigInt::from(0));
}

#[test]
fn derived_polynomials_relate_to_printed() {
    assert_eq!(coeffs(&q_derived(1, 1).unwrap()), vec![(-8, 2), (-6, 3)]);
    for m in 1..=6 {
        for n in 1..=6 {
            let pr = q_printed_parts(m, n).unwrap();
            let de = q_derived_parts(m, n).unwrap();
            assert_eq!(pr.positive, de.positive);
            let doubled: Vec<_> = pr.negative.terms().map(|(c, e)| (c * 2, e)).collect();
            let derived: Vec<_> = de.negative.terms().map(|(c, e)| (c.clone(), e)).collect();
            assert_eq!(doubled, derived, "({m},{n})");
        }
    }
    assert!(p_derived(2, 3).unwrap().degree().is_some());
}

#[test]
fn leading_term_signs() {
    assert_eq!(leading_term_sign(&q_printed(2, 1).unwrap(), Endpoint::Infinity).unwrap(), 1);
    assert_eq!(leading_term_sign(&p_printed(2, 1).unwrap(), Endpoint::Zero).unwrap(), -1);
    assert_eq!(leading_term_sign(&q_printed(1, 2).unwrap(), Endpoint::Zero).unwrap(), 1);
}

#[test]
fn bound_check_examples() {
    let r = bound_check(1, 1, &[2.0], &cfg(), Execution::Sequential).unwrap();
    assert_eq!(r.status_at(2.0, BoundKind::LowerPrinted), Some(BoundStatus::Fails));
    assert_eq!(r.status_at(2.0, BoundKind::LowerDerived), Some(BoundStatus::Holds));
    assert_eq!(r.findings.len(), 1);
    let r = bound_check(2, 1, &[50.0], &cfg(), Execution::Sequential).unwrap();
    assert_eq!(r.status_at(50.0, BoundKind::UpperPrinted), Some(BoundStatus::Holds));
}

#[test]
fn binomial_quantity_examples() {
    assert_eq!(binom_quantity(1, 1).unwrap(), (BigInt::from(1), BinomCase::Unit));
    assert_eq!(binom_quantity(1, 2).unwrap(), (BigInt::from(0), BinomCase::Vanishing));
    assert_eq!(binom_quantity(2, 3).unwrap(), (BigInt::from(2), BinomCase::AtLeastTwo));
}

#[test]
fn envelope_examples() {
    let f = f_value(idx(2, 2), 1000.0, &cfg()).unwrap();
    let e = envelope(idx(2, 2), 1000.0, Endpoint::Infinity).unwrap();
    assert!((f.value / e.value - 1.0).abs() <= 0.05);
    assert!(e.certainly_negative());
    let f = f_value(idx(1, 4), 1e-3, &cfg()).unwrap();
    let e = envelope(idx(1, 4), 1e-3, Endpoint::Zero).unwrap();
    assert!((f.value / e.value - 1.0).abs() <= 0.05);
}

#[test]
fn sign_change_witnesses() {
    let s = SearchConfig::default();
    let c = cfg();
    assert!(f_value(idx(2, 2), 1.0, &c).unwrap().certified_sign(10.0) == Some(1));
    assert!(f_value(idx(2, 2), 3.0, &c).unwrap().certified_sign(10.0) == Some(-1));
    let w = find_sign_change(2, 2, &s, &c).unwrap();
    let WitnessKind::SignChange { x_pos, x_neg } = w.kind else { panic!() };
    assert!((1.0..=3.0).contains(&x_pos) && (1.0..=3.0).contains(&x_neg));
    // positive near 0 and negative far out for m < ν
    let w = find_sign_change(1, 4, &s, &c).unwrap();
    let WitnessKind::SignChange { x_pos, x_neg } = w.kind else { panic!() };
    assert!(x_pos > x_neg);
    assert_eq!(w.predicted.zero, Some(-1));
    assert!(find_sign_change(3, 2, &s, &c).unwrap().is_certified());
}

#[test]
fn monotonicity_witnesses() {
    let s = SearchConfig::default();
    let c = cfg();
    let w = find_nonmonotonic(2, 2, &s, &c).unwrap();
    assert!(w.is_certified());
    assert_eq!(w.predicted.zero, Some(-1));
    assert_eq!(w.predicted.infinity, Some(1));
    let WitnessKind::NonMonotonic { x_up, x_down } = w.kind else { panic!() };
    assert!(x_down < x_up);
    let w = find_nonmonotonic(1, 4, &s, &c).unwrap();
    let WitnessKind::NonMonotonic { x_up, x_down } = w.kind else { panic!() };
    assert!(x_up < x_down);
}

#[test]
fn classify_examples() {
    let o = ClassifyOptions::default();
    let c = cfg();
    let e = classify(1, 2, &o, &c, Execution::Parallel).unwrap();
    assert_eq!(e.verdict, Verdict::CmNontrivial);
    assert!(matches!(e.evidence, Evidence::Cm(_)));
    assert_eq!(classify(4, 7, &o, &c, Execution::Parallel).unwrap().verdict, Verdict::CmTrivial);
    let e = classify(1, 4, &o, &c, Execution::Parallel).unwrap();
    assert_eq!(e.verdict, Verdict::SignChangingNonmonotonic);
    assert!(matches!(e.evidence, Evidence::Witnesses { .. }));
}

#[test]
fn classifier_evidence_is_exclusive() {
    // the CM check refutes every sign-changing pair, and no witness exists for f_{1,2}
    let grid = GridSpec::standard().points().unwrap();
    for m in 1..=3 {
        for n in [2, 4, 6] {
            if (m, n) == (1, 2) {
                continue;
            }
            let r = cm_check(idx(m, n), 1, &grid, &cfg(), Execution::Parallel).unwrap();
            assert!(matches!(r.verdict, CmVerdict::Violation { .. }), "({m},{n})");
        }
    }
    let g = log_grid(1e-3, 1e3, 128).unwrap();
    for order in [0, 1] {
        let signs: Vec<_> = g
            .iter()
            .map(|&x| f_derivative(idx(1, 2), order, x, &cfg()).unwrap().certified_sign(10.0))
            .collect();
        let want = if order == 0 { 1 } else { -1 };
        assert!(signs.iter().all(|s| s.is_none() || *s == Some(want)));
    }
}

// inequalities

#[test]
fn inequality_examples() {
    let r = psi_log_bounds_check(1.0, &cfg()).unwrap();
    assert!(r.passed() && r.lower.value == -1.0 && r.upper.value == -0.5);
    assert!(psi_log_bounds_check(100.0, &cfg()).unwrap().passed());
    assert!(psi_log_bounds_check(0.1, &cfg()).unwrap().passed());
    let r = polygamma_bounds_check(1, 1.0, &cfg()).unwrap();
    assert!(r.passed() && r.lower.value == 1.5 && r.upper.value == 2.0);
    let r = polygamma_bounds_check(2, 1.0, &cfg()).unwrap();
    assert!(r.passed() && r.lower.value == 2.0 && r.upper.value == 3.0);
    assert!(polygamma_bounds_check(4, 0.5, &cfg()).unwrap().passed());
}

#[test]
fn bounds_suite_examples() {
    let s = bounds_suite(1, &[1.0], &cfg(), Execution::Sequential).unwrap();
    let single = polygamma_bounds_check(1, 1.0, &cfg()).unwrap();
    assert_eq!(s.results.iter().filter(|r| r.k == 1).collect::<Vec<_>>(), vec![&single]);
    let grid = log_grid(0.05, 100.0, 100).unwrap();
    assert!(bounds_suite(8, &grid, &cfg(), Execution::Parallel).unwrap().passed());
}
