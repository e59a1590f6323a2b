//! Exponentially damped integrals on `(0, ∞)`: the cosine and sine moments of
//! `θ(x) = 2 log(1-e^{-x})`, the plain log moments, and Legendre's
//! `∫ sin(xt)/(e^x-1) dx`.
//!
//! Every integrand is bounded by `c x^e e^{-x}`, which fixes the truncation
//! point. The range is cut into half-period segments of the oscillating
//! factor and the segment integrals are summed in order.

use std::f64::consts::PI;

use rug::ops::Pow;
use rug::float::Constant;
use rug::Float;

use super::tanh_sinh::integrate_segments;
use super::QuadratureResult;
use crate::error::{domain, Result};
use crate::hpreal::{abs_up, HPReal};
use crate::precision::PrecisionContext;
use crate::special::util::factorial_float;
use crate::special::{bernoulli, hurwitz_zeta};

/// A quadrature value together with the closed form it should reproduce.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub quadrature: QuadratureResult,
    pub reference: HPReal,
}

impl IdentityCheck {
    pub fn discrepancy(&self) -> f64 {
        self.quadrature.value.abs_diff(&self.reference)
    }
}

/// `θ(x) = log(1 + e^{-2x} - 2e^{-x}) = 2 log(1 - e^{-x})`, computed without
/// cancellation at both ends.
pub fn theta(x: &Float) -> Float {
    let prec = x.prec();
    if *x < 1 {
        let em1 = Float::with_val(prec, -x.clone()).exp_m1();
        Float::with_val(prec, -em1).ln() * 2u32
    } else {
        let e = Float::with_val(prec, -x.clone()).exp();
        Float::with_val(prec, -e).ln_1p() * 2u32
    }
}

/// `∫_X^∞ x^e e^{-x} dx ≤ X^e e^{-X} / (1 - e/X)` for `X > e`.
fn cutoff(coef: f64, e: u32, target: f64) -> (f64, f64) {
    let e = e as f64;
    let bound = |x: f64| (coef.ln() + e * x.ln() - x - (1.0 - e / x).ln()).exp();
    let mut x = (e + 1.0).max(8.0);
    while bound(x) > target {
        x += 1.0;
    }
    (x, bound(x))
}

/// Integrates `f` over `(0, ∞)` given `|f(x)| ≤ coef x^e e^{-x}` for `x ≥ 8`.
fn damped<F>(f: &F, coef: f64, e: u32, width: f64, tol: f64, prec: u32) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Result<HPReal> + Sync,
{
    let (cut, tail) = cutoff(coef, e, tol * 1e-2);
    let segments = (cut / width).ceil() as usize;
    let points: Vec<Float> = (0..=segments)
        .map(|i| Float::with_val(prec, (i as f64 * width).min(cut)))
        .collect();
    let r = integrate_segments(f, &points, tol * 0.98, prec)?;
    Ok(r.widen(tail))
}

fn check_t(t: &Float) -> Result<()> {
    if !t.is_finite() || *t <= 0 {
        return Err(domain(format!("t must be positive, got {}", t.to_f64())));
    }
    Ok(())
}

fn two_pi_pow(prec: u32, k: i32) -> Float {
    let tp = Float::with_val(prec, Constant::Pi) * 2u32;
    tp.pow(k)
}

/// `(2π)^{-(2n+2)} ∫_0^∞ x^{2n} (cos(xt/2π) - 1) θ(x) dx`, which equals
/// `g_n^{(2n)}(t)`.
pub fn osc_log_moment(n: u32, t: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    check_t(t)?;
    let prec = ctx.bits() + 16;
    let u = 2f64.powi(1 - prec as i32);
    let t = Float::with_val(prec, t);
    let freq = Float::with_val(prec, &t / (Float::with_val(prec, Constant::Pi) * 4u32));
    let f = |x: &Float| -> Result<HPReal> {
        // cos(2a) - 1 = -2 sin²(a)
        let arg = Float::with_val(prec, x * &freq);
        let s = Float::with_val(prec, arg.sin_ref());
        let v = Float::with_val(prec, x.pow(2 * n)) * theta(x) * s.square() * -2i32;
        let e = u * abs_up(&v) * (abs_up(&arg) + 32.0 + 2.0 * n as f64);
        Ok(HPReal::new(v, e))
    };
    let tf = t.to_f64();
    let width = (2.0 * PI * PI / tf).min(2.0);
    let scale = two_pi_pow(prec, -(2 * n as i32 + 2));
    let tol = ctx.quad_tol() / scale.to_f64();
    Ok(damped(&f, 4.03, 2 * n, width, tol, prec)?.scale(&scale))
}

/// `-(2π)^{-(2n+3)} ∫_0^∞ x^{2n+1} sin(xt/2π) θ(x) dx`, which equals
/// `g_n^{(2n+1)}(t)`.
pub fn osc_sine_moment(n: u32, t: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    check_t(t)?;
    let prec = ctx.bits() + 16;
    let u = 2f64.powi(1 - prec as i32);
    let t = Float::with_val(prec, t);
    let freq = Float::with_val(prec, &t / (Float::with_val(prec, Constant::Pi) * 2u32));
    let f = |x: &Float| -> Result<HPReal> {
        let arg = Float::with_val(prec, x * &freq);
        let v = Float::with_val(prec, x.pow(2 * n + 1)) * theta(x) * Float::with_val(prec, arg.sin_ref());
        let e = u * abs_up(&v) * (abs_up(&arg) + 32.0 + 2.0 * n as f64);
        Ok(HPReal::new(v, e))
    };
    let tf = t.to_f64();
    let width = (2.0 * PI * PI / tf).min(2.0);
    let scale = -two_pi_pow(prec, -(2 * n as i32 + 3));
    let tol = ctx.quad_tol() / abs_up(&scale);
    Ok(damped(&f, 2.02, 2 * n + 1, width, tol, prec)?.scale(&scale))
}

/// `∫_0^∞ x^{2n} θ(x) dx`, with reference `-2 (2n)! ζ(2n+2)`.
pub fn log_moment(n: u32, ctx: &PrecisionContext) -> Result<IdentityCheck> {
    let prec = ctx.bits() + 16;
    let u = 2f64.powi(1 - prec as i32);
    let f = |x: &Float| -> Result<HPReal> {
        let v = Float::with_val(prec, x.pow(2 * n)) * theta(x);
        let e = u * abs_up(&v) * (32.0 + 2.0 * n as f64);
        Ok(HPReal::new(v, e))
    };
    let quadrature = damped(&f, 2.02, 2 * n, 2.0, ctx.quad_tol(), prec)?;
    Ok(IdentityCheck {
        quadrature,
        reference: log_moment_closed_form(n, ctx)?,
    })
}

/// `-2 (2n)! ζ(2n+2) = (-1)^{n+1} (2π)^{2n+2} B_{2n+2} / ((2n+2)(2n+1))`.
pub fn log_moment_closed_form(n: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let prec = ctx.bits() + 16;
    let z = hurwitz_zeta(2 * n + 2, 1, ctx)?;
    let f = factorial_float(2 * n, prec) * -2i32;
    Ok(z.scale(&f))
}

/// The same right side carrying an extra factor `2^{2n}`; it coincides with
/// [`log_moment_closed_form`] only at `n = 0`.
pub fn log_moment_stated_form(n: u32, ctx: &PrecisionContext) -> HPReal {
    let prec = ctx.bits() + 16;
    let b = bernoulli(2 * n + 2).to_float(prec);
    let sign = if n.is_multiple_of(2) { -1i32 } else { 1 };
    let v = two_pi_pow(prec, 2 * n as i32 + 2) * Float::with_val(prec, Float::i_exp(1, 2 * n as i32)) * b * sign
        / ((2 * n + 2) * (2 * n + 1));
    let e = 2f64.powi(4 - prec as i32) * abs_up(&v);
    HPReal::new(v, e)
}

/// `(π/2) coth(πt) - 1/(2t)`, with extra precision for the cancellation at
/// small `t`.
pub fn legendre_closed_form(t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_t(t)?;
    let extra = (2.0 * (1.0 / t.to_f64()).log2()).max(0.0).ceil() as u32 + 16;
    let prec = ctx.bits() + extra;
    let t = Float::with_val(prec, t);
    let pi = Float::with_val(prec, Constant::Pi);
    let coth = Float::with_val(prec, &pi * &t).coth();
    let v = Float::with_val(prec, &pi * coth) / 2u32 - Float::with_val(prec, &t * 2u32).recip();
    let e = 2f64.powi(4 - ctx.bits() as i32 - 16) * abs_up(&v);
    Ok(HPReal::new(v, e))
}

/// `∫_0^∞ sin(xt)/(e^x - 1) dx` against its closed form.
pub fn legendre_formula_check(t: &Float, ctx: &PrecisionContext) -> Result<IdentityCheck> {
    check_t(t)?;
    let prec = ctx.bits() + 16;
    let u = 2f64.powi(1 - prec as i32);
    let tt = Float::with_val(prec, t);
    let f = |x: &Float| -> Result<HPReal> {
        let arg = Float::with_val(prec, x * &tt);
        let v = Float::with_val(prec, arg.sin_ref()) / Float::with_val(prec, x.exp_m1_ref());
        let e = u * abs_up(&v) * (abs_up(&arg) + 16.0);
        Ok(HPReal::new(v, e))
    };
    let width = (PI / t.to_f64()).min(2.0);
    let quadrature = damped(&f, 1.01, 0, width, ctx.quad_tol(), prec)?;
    Ok(IdentityCheck {
        quadrature,
        reference: legendre_closed_form(t, ctx)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_is_nonpositive_and_increasing() {
        for &x in &[1e-6f64, 0.3, 0.999, 1.0, 4.0] {
            let xf = Float::with_val(128, x);
            let th = theta(&xf);
            assert!(th <= 0);
            let d = 2.0 * ((-x).exp() - (-2.0 * x).exp());
            assert!(d >= 0.0);
            let direct = 2.0 * (-(-x).exp_m1()).ln();
            assert!((th.to_f64() - direct).abs() <= 1e-12 * direct.abs());
        }
        let far = theta(&Float::with_val(128, 40)).to_f64();
        assert!((far / (-2.0 * (-40f64).exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_moment_zero() {
        let ctx = PrecisionContext::new(30).unwrap();
        let r = log_moment(0, &ctx).unwrap();
        assert!(r.discrepancy() < 10.0 * ctx.quad_tol(), "{}", r.discrepancy());
        let expect = -std::f64::consts::PI.powi(2) / 3.0;
        assert!((r.quadrature.value.to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn legendre_at_one() {
        let ctx = PrecisionContext::new(30).unwrap();
        let r = legendre_formula_check(&ctx.float(1), &ctx).unwrap();
        assert!(r.discrepancy() < 10.0 * ctx.quad_tol());
        assert!((r.reference.to_f64() - 1.0766740474685811).abs() < 1e-14);
    }
}
