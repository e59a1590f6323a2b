//! Invariants checked on random inputs.

use proptest::prelude::*;
use rug::Float;

use cmdeg::kernels::{binet_f, binet_g, s_kernel_prime, BinetShape};
use cmdeg::lab::{log_grid, ratio_infimum_for, stray_point, Conjecture};
use cmdeg::quadrature::{laplace_integral, SumKernel};
use cmdeg::remainders::{ratio_bound, RemainderSpec};
use cmdeg::special::laguerre;
use cmdeg::{HPReal, PrecisionContext};

fn ctx() -> PrecisionContext {
    PrecisionContext::new(30).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn szego_bound(m in 0u32..=60, t in 1e-4f64..60.0) {
        let c = ctx();
        let tf = c.float(t);
        let l = laguerre(m, &tf, &c).abs();
        let bound = HPReal::exact(Float::with_val(c.bits() + 16, &tf / 2u32).exp());
        prop_assert!(!(&bound - &l).certainly_negative());
    }

    #[test]
    fn f_is_t_times_g(n in 0u32..=4, t in 1e-4f64..60.0) {
        let c = ctx();
        let tf = c.float(t);
        let f = binet_f(n, &tf, &c).unwrap();
        let g = binet_g(n, &tf, &c).unwrap().scale(&tf);
        prop_assert!(f.consistent_with(&g));
    }

    #[test]
    fn s_prime_is_bounded_by_a_twelfth(t in 0.0f64..1e4) {
        let c = ctx();
        let v = s_kernel_prime(&c.float(t), &c).abs();
        prop_assert!(v.to_f64() - v.err_bound() <= 1.0 / 12.0);
    }

    #[test]
    fn log_grid_is_increasing(lo in 1e-6f64..1.0, span in 1.0f64..1e4, points in 2usize..200) {
        let g = log_grid(lo, lo * span, points);
        prop_assert_eq!(g.len(), points);
        prop_assert_eq!(g[0], lo);
        prop_assert_eq!(*g.last().unwrap(), lo * span);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stray_point_decreases(m in 0u32..500) {
        prop_assert!(stray_point(m + 1) < stray_point(m));
    }

    #[test]
    fn conjecture_round_trips(i in 0usize..6) {
        let c = Conjecture::ALL[i];
        prop_assert_eq!(c.to_string().parse::<Conjecture>().unwrap(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn laplace_is_linear(x in 0.5f64..20.0, n in 0i32..3, p in 0u32..3) {
        let c = ctx();
        let xf = c.float(x);
        let a = BinetShape::new(n, p, 0).unwrap();
        let b = BinetShape::new(-1, 2, 1).unwrap();
        let la = laplace_integral(&a, &xf, &c).unwrap();
        let lb = laplace_integral(&b, &xf, &c).unwrap();
        let lab = laplace_integral(&SumKernel(a, b), &xf, &c).unwrap();
        let d = lab.value.abs_diff(&(&la.value + &lb.value));
        prop_assert!(d <= 10.0 * c.quad_tol(), "{d:e}");
    }

    #[test]
    fn ratio_grows_with_x(n in 1u32..=3, x in 1e-3f64..100.0, k in 1.1f64..10.0) {
        let c = ctx();
        let a = ratio_bound(n, &c.float(x), &c).unwrap();
        let b = ratio_bound(n, &c.float(x * k), &c).unwrap();
        prop_assert!(!(&b - &a).certainly_negative());
    }

    #[test]
    fn infimum_is_below_every_sample(n in 1u32..=3, x in 1e-3f64..1e3) {
        let c = ctx();
        let spec = RemainderSpec::new(n, 0);
        let inf = ratio_infimum_for(&spec, (1e-3, 1e3), 17, &c).unwrap();
        let r = ratio_bound(n, &c.float(x), &c).unwrap();
        prop_assert!(inf.value.to_f64() <= r.to_f64() + r.err_bound() + inf.value.err_bound());
    }
}
