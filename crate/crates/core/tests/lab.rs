//! Frozen values and end-to-end behaviour of the lab layer.

use cmdeg::kernels::{k_bound, laguerre_kernel_f_prime, laguerre_sum_f_prime};
use cmdeg::lab::{
    default_grid, degree_bracket, derivative_degree_bracket, kernel_sign_scan, log_grid, stray_point, BracketConfig,
    Conjecture, Witness,
};
use cmdeg::quadrature::log_moment;
use cmdeg::remainders::{ratio_bound, remainder, RemainderSpec};
use cmdeg::PrecisionContext;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(40).unwrap()
}

#[test]
fn r0_at_one() {
    let c = ctx();
    let v = remainder(0, &c.float(1), &c).unwrap();
    // 1 - log(2π)/2
    assert!((v.to_f64() - 0.081_061_466_795_327_26).abs() < 1e-15);
}

#[test]
fn log_moment_zero_is_minus_pi_squared_over_three() {
    let c = ctx();
    let r = log_moment(0, &c).unwrap();
    assert!((r.quadrature.value.to_f64() + std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-14);
}

#[test]
fn frozen_ratios_at_small_x() {
    let c = ctx();
    let x = c.float(1e-3);
    for (n, want) in [(1, 1.02535679788), (2, 3.00005743374), (3, 5.00000699962)] {
        let r = ratio_bound(n, &x, &c).unwrap().to_f64();
        assert!((r - want).abs() < 1e-10, "n={n}: {r}");
    }
}

#[test]
fn frozen_k_at_six() {
    let c = ctx();
    let k = k_bound(&c.float(6), 1, &c).unwrap().to_f64();
    assert!((k - 0.0107270956675).abs() < 1e-12, "{k}");
}

#[test]
fn first_negative_point_of_g1_third_derivative() {
    let c = ctx();
    let s = kernel_sign_scan(1, 3, &default_grid(), &c).unwrap();
    let (t, v) = s.witness.expect("witness");
    assert!((t - 6.628096720544293).abs() < 1e-9);
    assert!(v.certainly_negative());
    assert!(kernel_sign_scan(1, 2, &default_grid(), &c).unwrap().passed());
}

#[test]
fn kernel_scan_rejects_levels_past_vanishing_order() {
    let c = ctx();
    assert!(kernel_sign_scan(1, 4, &[1.0], &c).is_ok());
    assert!(kernel_sign_scan(1, 5, &[1.0], &c).is_err());
}

#[test]
fn r2_bracket_has_kernel_witness_at_three() {
    let c = ctx();
    let levels = [0.0, 1.0, 2.0, 3.0, 4.0];
    let r = degree_bracket(&RemainderSpec::new(2, 0), &levels, &BracketConfig::default(), &c).unwrap();
    assert_eq!(r.lo, 2.0);
    assert_eq!(r.hi, 3.0);
    assert!(matches!(r.witness, Some(Witness::Kernel { level, .. }) if level == 3));
}

#[test]
fn r1_bracket_is_capped_by_the_ratio() {
    let c = ctx();
    let r = degree_bracket(&RemainderSpec::new(1, 0), &[0.0, 1.0, 2.0], &BracketConfig::default(), &c).unwrap();
    assert_eq!(r.lo, 1.0);
    assert!(r.hi > 1.0 && r.hi < 1.03, "{}", r.hi);
    assert!(matches!(r.witness, Some(Witness::Ratio { .. })));
}

#[test]
fn derivative_bracket_for_r1_prime_certifies_level_one() {
    let c = ctx();
    let cfg = BracketConfig {
        grid: log_grid(1e-4, 60.0, 400),
        ..BracketConfig::default()
    };
    let r = derivative_degree_bracket(1, 1, &cfg, &c).unwrap();
    assert!(r.lo >= 1.0);
    assert!(r.hi >= r.lo);
    assert!(derivative_degree_bracket(2, 1, &cfg, &c).is_err());
}

#[test]
fn stray_point_at_eighty_is_negative_in_both_representations() {
    let c = ctx();
    let t = c.float(stray_point(80));
    let a = laguerre_kernel_f_prime(80, &t, &c).unwrap();
    let b = laguerre_sum_f_prime(80, &t, &c).unwrap();
    assert!(a.certainly_negative());
    assert!(a.agrees_with(&b, 1e-20 * a.to_f64().abs()));
    let rel = a.to_f64() / -1.164066e117 - 1.0;
    assert!(rel.abs() < 1e-6, "{}", a.to_f64());
}

#[test]
fn conjecture_targets_are_tagged_back() {
    for c in Conjecture::ALL {
        for spec in c.targets() {
            assert_eq!(Conjecture::for_target(&spec), Some(c), "{spec:?}");
        }
    }
}
