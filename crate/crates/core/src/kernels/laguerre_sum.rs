//! `f_m(t) = (m-1)! Σ_{k≥0} e^{-kt} L_{m-1}(kt)` and its derivative.
//!
//! Truncation uses Szegő's bound `|L_n(x)| ≤ e^{x/2}`, so the terms are
//! dominated by the geometric sequence `e^{-kt/2}`.

use std::f64::consts::LN_2;

use rug::Float;

use super::binet::{check_t, round_prec};
use crate::error::{domain, Result};
use crate::hpreal::{abs_up, sum_bounds, HPReal};
use crate::precision::PrecisionContext;
use crate::special::laguerre_pair;
use crate::special::util::{factorial_float, ln_factorial};

const MAX_TERMS: u64 = 2_000_000;

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(domain("Laguerre kernel index m must be >= 1"));
    }
    Ok(())
}

/// Smallest `K` with `bound(K) < tol`, where `bound` is decreasing.
fn terms_needed(bound: impl Fn(u64) -> f64, tol: f64) -> Result<u64> {
    let mut k = 1u64;
    while bound(k) >= tol {
        k *= 2;
        if k > MAX_TERMS {
            return Err(domain("Laguerre sum needs too many terms at this t"));
        }
    }
    let (mut lo, mut hi) = (k / 2, k);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bound(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn prec_for(m: u32, ctx: &PrecisionContext) -> u32 {
    round_prec(ctx.bits() + 24 + (ln_factorial(m as u64) / LN_2).ceil() as u32)
}

/// `f_m(t)` by the Laguerre sum.
pub fn laguerre_sum_f(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_m(m)?;
    check_t(t)?;
    let n = m - 1;
    let tf = t.to_f64();
    let prec = prec_for(m, ctx);
    let u = 2f64.powi(1 - prec as i32);
    let lnfact = ln_factorial(n as u64);
    let ln_denom = (-(-tf / 2.0).exp_m1()).ln();
    // (m-1)! e^{-(K+1)t/2} / (1 - e^{-t/2})
    let tail = |k: u64| (lnfact - (k + 1) as f64 * tf / 2.0 - ln_denom).exp();
    let tol = ctx.series_tol().min(2f64.powi(-(ctx.bits() as i32))) * lnfact.exp().max(1.0) * 1e-2;
    let kmax = terms_needed(tail, tol)?;

    let t = Float::with_val(prec, t);
    let decay = Float::with_val(prec, -t.clone()).exp();
    let mut ek = decay.clone();
    let mut sum = Float::with_val(prec, 1); // k = 0: L_n(0) = 1
    let mut err = 0.0;
    for k in 1..=kmax {
        let x = Float::with_val(prec, &t * k);
        let p = laguerre_pair(n, 0, &x, prec);
        let term = Float::with_val(prec, &p.cur * &ek);
        err += p.cur_err * abs_up(&ek) + 4.0 * (k as f64).max(1.0).log2() * u * abs_up(&term) + 2.0 * u * abs_up(&term);
        sum += &term;
        ek *= &decay;
    }
    err += u * abs_up(&sum) * (kmax as f64).log2().max(1.0);
    let fact = factorial_float(n, prec);
    let v = Float::with_val(prec, &sum * &fact);
    let e = sum_bounds(&[err * abs_up(&fact), tail(kmax), 2.0 * u * abs_up(&v)]);
    Ok(HPReal::new(v, e).with_prec(ctx.bits() + 16))
}

/// `f_m'(t)` from `t f_m'(t) = (m-1)! Σ_{k≥1} e^{-kt} (n L_n - n L_{n-1} - kt L_n)(kt)`, `n = m-1`.
pub fn laguerre_sum_f_prime(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_m(m)?;
    check_t(t)?;
    let n = m - 1;
    let nf = n as f64;
    let tf = t.to_f64();
    let prec = prec_for(m + 1, ctx);
    let u = 2f64.powi(1 - prec as i32);
    let lnfact = ln_factorial(n as u64);
    // Σ_{k>K} q^k (2n + kt), q = e^{-t/2}
    let q = (-tf / 2.0).exp();
    let one_minus_q = -(-tf / 2.0).exp_m1();
    let tail = |k: u64| {
        let kf = k as f64;
        let geo = (lnfact + (kf + 1.0) * (-tf / 2.0) - one_minus_q.ln()).exp();
        let lin = (lnfact + (kf + 1.0) * (-tf / 2.0) - 2.0 * one_minus_q.ln()).exp() * ((kf + 1.0) - kf * q);
        (2.0 * nf * geo + tf * lin) / tf
    };
    let tol = ctx.series_tol().min(2f64.powi(-(ctx.bits() as i32))) * (lnfact.exp() * (m as f64)).max(1.0) * 1e-2;
    let kmax = terms_needed(tail, tol)?;

    let t = Float::with_val(prec, t);
    let decay = Float::with_val(prec, -t.clone()).exp();
    let mut ek = decay.clone();
    let mut sum = Float::new(prec);
    let mut err = 0.0;
    for k in 1..=kmax {
        let x = Float::with_val(prec, &t * k);
        let p = laguerre_pair(n, 0, &x, prec);
        // (n - x) L_n - n L_{n-1}
        let coef = Float::with_val(prec, nf) - &x;
        let mut inner = Float::with_val(prec, &coef * &p.cur);
        inner -= Float::with_val(prec, &p.prev * nf);
        let inner_err = abs_up(&coef) * p.cur_err
            + nf * p.prev_err
            + 4.0 * u * (abs_up(&coef) * abs_up(&p.cur) + nf * abs_up(&p.prev) + abs_up(&x) * abs_up(&p.cur));
        let term = Float::with_val(prec, &inner * &ek);
        err += inner_err * abs_up(&ek) + (4.0 + (k as f64).log2()) * u * abs_up(&term);
        sum += &term;
        ek *= &decay;
    }
    err += u * abs_up(&sum) * (kmax as f64).log2().max(1.0);
    let fact = factorial_float(n, prec);
    let v = Float::with_val(prec, &sum * &fact) / &t;
    let e = sum_bounds(&[err * abs_up(&fact) / tf, tail(kmax), 4.0 * u * abs_up(&v)]);
    Ok(HPReal::new(v, e).with_prec(ctx.bits() + 16))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_matches_closed_form() {
        let c = PrecisionContext::default();
        for &t in &[0.3f64, 1.0, 4.0] {
            let x = c.float(t);
            let v = laguerre_sum_f(1, &x, &c).unwrap();
            let em1 = Float::with_val(c.bits(), -x.clone()).exp_m1();
            let expect = -Float::with_val(c.bits(), em1.recip_ref());
            assert!(v.agrees_with(&HPReal::exact(expect), 1e-44), "t={t}");

            let d = laguerre_sum_f_prime(1, &x, &c).unwrap();
            let e = (-t).exp();
            let expect = -e / (1.0 - e).powi(2);
            assert!((d.to_f64() - expect).abs() < 1e-13);
        }
    }
}
