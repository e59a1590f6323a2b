//! Laguerre polynomials by the upward three-term recurrence with a running
//! error bound.

use rug::Float;

use crate::hpreal::{abs_up, sum_bounds, HPReal};
use crate::precision::PrecisionContext;

/// Values and running error bounds of `L_{m-1}^{(α)}(t)` and `L_m^{(α)}(t)`.
#[derive(Debug, Clone)]
pub(crate) struct LaguerrePair {
    pub prev: Float,
    pub prev_err: f64,
    pub cur: Float,
    pub cur_err: f64,
}

/// Runs `(k+1) L_{k+1} = (2k+1+α-t) L_k - (k+α) L_{k-1}` up to index `m`.
///
/// For `m = 0` the `prev` slot holds `L_{-1} = 0`.
pub(crate) fn laguerre_pair(m: u32, alpha: u32, t: &Float, prec: u32) -> LaguerrePair {
    let u = 2f64.powi(1 - prec as i32);
    let t = Float::with_val(prec, t);
    let mut prev = Float::with_val(prec, 0);
    let mut prev_err = 0.0;
    let mut cur = Float::with_val(prec, 1);
    let mut cur_err = 0.0;
    for k in 0..m {
        let a = Float::with_val(prec, (2 * k + 1 + alpha) as f64) - &t;
        let b = (k + alpha) as f64;
        let a_mag = abs_up(&a);
        let mut next = Float::with_val(prec, &a * &cur);
        next -= Float::with_val(prec, &prev * b);
        next /= k + 1;
        let cur_mag = abs_up(&cur);
        let prev_mag = abs_up(&prev);
        let propagated = (a_mag * cur_err + b * prev_err) / (k + 1) as f64;
        // a is rounded, then two products, a difference and a division.
        let local = u * (2.0 * a_mag * cur_mag + 2.0 * b * prev_mag) / (k + 1) as f64
            + 2.0 * u * abs_up(&next)
            + u * abs_up(&t) * cur_mag / (k + 1) as f64;
        let next_err = sum_bounds(&[propagated, local]);
        prev = std::mem::replace(&mut cur, next);
        prev_err = std::mem::replace(&mut cur_err, next_err);
    }
    LaguerrePair {
        prev,
        prev_err,
        cur,
        cur_err,
    }
}

/// `L_m(t)`.
pub fn laguerre(m: u32, t: &Float, ctx: &PrecisionContext) -> HPReal {
    laguerre_generalized(m, 0, t, ctx)
}

/// Generalized Laguerre polynomial `L_m^{(α)}(t)` for integer `α ≥ 0`.
pub fn laguerre_generalized(m: u32, alpha: u32, t: &Float, ctx: &PrecisionContext) -> HPReal {
    let p = laguerre_pair(m, alpha, t, ctx.bits());
    HPReal::new(p.cur, p.cur_err)
}

/// `L_m'(t)` by differentiating the recurrence:
/// `(k+1) D_{k+1} = (2k+1-t) D_k - L_k - k D_{k-1}`.
pub fn laguerre_derivative(m: u32, t: &Float, ctx: &PrecisionContext) -> HPReal {
    let prec = ctx.bits();
    let u = 2f64.powi(1 - prec as i32);
    let t = Float::with_val(prec, t);
    let (mut lp, mut lc) = (Float::with_val(prec, 0), Float::with_val(prec, 1));
    let (mut lpe, mut lce) = (0.0, 0.0);
    let (mut dp, mut dc) = (Float::with_val(prec, 0), Float::with_val(prec, 0));
    let (mut dpe, mut dce) = (0.0, 0.0);
    for k in 0..m {
        let a = Float::with_val(prec, (2 * k + 1) as f64) - &t;
        let a_mag = abs_up(&a);
        let kf = k as f64;
        let div = (k + 1) as f64;

        let mut dn = Float::with_val(prec, &a * &dc);
        dn -= &lc;
        dn -= Float::with_val(prec, &dp * k);
        dn /= k + 1;
        let dn_err = sum_bounds(&[
            (a_mag * dce + lce + kf * dpe) / div,
            u * (2.0 * a_mag * abs_up(&dc) + 2.0 * abs_up(&lc) + 2.0 * kf * abs_up(&dp)) / div,
            2.0 * u * abs_up(&dn) + u * abs_up(&t) * abs_up(&dc) / div,
        ]);

        let mut ln = Float::with_val(prec, &a * &lc);
        ln -= Float::with_val(prec, &lp * k);
        ln /= k + 1;
        let ln_err = sum_bounds(&[
            (a_mag * lce + kf * lpe) / div,
            u * (2.0 * a_mag * abs_up(&lc) + 2.0 * kf * abs_up(&lp)) / div,
            2.0 * u * abs_up(&ln) + u * abs_up(&t) * abs_up(&lc) / div,
        ]);

        dp = std::mem::replace(&mut dc, dn);
        dpe = std::mem::replace(&mut dce, dn_err);
        lp = std::mem::replace(&mut lc, ln);
        lpe = std::mem::replace(&mut lce, ln_err);
    }
    HPReal::new(dc, dce)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn f(v: f64) -> Float {
        Float::with_val(200, v)
    }

    #[test]
    fn low_orders() {
        let c = ctx();
        for &t in &[0.0, 0.3, 2.0, 17.5] {
            assert_eq!(laguerre(0, &f(t), &c).to_f64(), 1.0);
            let l1 = laguerre(1, &f(t), &c);
            assert!((l1.to_f64() - (1.0 - t)).abs() < 1e-14);
        }
        let l2 = laguerre(2, &f(2.0), &c);
        assert!(l2.agrees_with(&HPReal::exact(f(-1.0)), 1e-45));
    }

    // Explicit sum L_m(t) = Σ C(m,j) (-t)^j / j! in exact rationals.
    #[test]
    fn matches_explicit_coefficients() {
        use rug::{Integer, Rational};
        let c = ctx();
        let t = Rational::from((37, 10));
        for m in [5u32, 12, 25] {
            let mut acc = Rational::new();
            let mut tp = Rational::from(1);
            for j in 0..=m {
                let binom = Integer::from(Integer::binomial_u(m, j));
                let fact = Integer::from(Integer::factorial(j));
                let sign = if j % 2 == 0 { 1 } else { -1 };
                acc += Rational::from((binom * sign, fact)) * &tp;
                tp *= &t;
            }
            let v = laguerre(m, &Float::with_val(200, &t), &c);
            let expect = HPReal::exact(Float::with_val(200, &acc));
            assert!(v.consistent_with(&expect), "m = {m}");
            assert!(v.err_bound() < 1e-40);
        }
    }

    #[test]
    fn generalized_alpha_one_is_minus_derivative_shifted() {
        // L_m'(t) = -L_{m-1}^{(1)}(t)
        let c = ctx();
        for m in 1..=20u32 {
            for &t in &[0.1, 1.0, 9.0, 40.0] {
                let d = laguerre_derivative(m, &f(t), &c);
                let g = laguerre_generalized(m - 1, 1, &f(t), &c);
                let s = &d + &g;
                assert!(abs_up(s.value()) <= s.err_bound() + 1e-60, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn szego_bound_and_derivative_identity() {
        let c = ctx();
        let grid: Vec<f64> = (0..=120).map(|i| 1e-3 * 10f64.powf(5.0 * i as f64 / 120.0)).collect();
        for m in 0..=60u32 {
            for &t in &grid {
                let l = laguerre(m, &f(t), &c);
                let bound = Float::with_val(200, t / 2.0).exp();
                let excess = Float::with_val(200, l.value().clone().abs() - &bound);
                assert!(excess.to_f64() + l.err_bound() <= 0.0 || t == 0.0, "m={m} t={t}");
            }
        }
        for m in 1..=40u32 {
            for &t in grid.iter().step_by(4) {
                let x = f(t);
                let d = laguerre_derivative(m, &x, &c);
                let lm = laguerre(m, &x, &c);
                let lm1 = laguerre(m - 1, &x, &c);
                let lhs = d.scale(&x);
                let rhs = (&lm - &lm1).scale(&Float::with_val(200, m));
                let scale = abs_up(lhs.value()).max(1.0);
                assert!(lhs.abs_diff(&rhs) <= 1e-42 * scale, "m={m} t={t}");
            }
        }
    }
}
