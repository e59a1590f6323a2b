//! Elementary bound functions for the Laguerre kernel.

use rug::Float;

use super::binet::check_t;
use crate::error::{domain, Result};
use crate::hpreal::{rounding, HPReal};
use crate::precision::PrecisionContext;
use crate::special::util::factorial_float;

fn finish(v: Float, ctx: &PrecisionContext) -> HPReal {
    // A handful of correctly rounded operations on exact inputs.
    let e = 32.0 * rounding(&v) + 2f64.powi(-(ctx.bits() as i32) - 8);
    HPReal::new(v, e)
}

fn parts(t: &Float, prec: u32) -> (Float, Float) {
    // (e^{-t/2}/(1-e^{-t/2}), 1/(4 sinh²(t/4)))
    let half = Float::with_val(prec, t) / 2u32;
    let em1 = Float::with_val(prec, -half).exp_m1(); // e^{-t/2} - 1
    let geo = Float::with_val(prec, -Float::with_val(prec, em1.recip_ref())) - 1u32;
    let sh = Float::with_val(prec, Float::with_val(prec, t) / 4u32).sinh();
    let csch = Float::with_val(prec, sh.square() * 4u32).recip();
    (geo, csch)
}

/// `K(t, m) = m/12 - 2m e^{-t/2}/(t(1-e^{-t/2})) - 1/(4 sinh²(t/4))`.
pub fn k_bound(t: &Float, m: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    check_t(t)?;
    if m == 0 {
        return Err(domain("K(t, m) needs m >= 1"));
    }
    let prec = ctx.bits() + 32;
    let (geo, csch) = parts(t, prec);
    let mut v = Float::with_val(prec, m) / 12u32;
    v -= Float::with_val(prec, &geo * (2 * m)) / Float::with_val(prec, t);
    v -= &csch;
    Ok(finish(v, ctx))
}

/// Right side of `t f_m'(t) ≤ 2 m! e^{-t/2}/(1-e^{-t/2}) + (m-1)! t/(4 sinh²(t/4))`.
pub fn eq_p_bound(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_t(t)?;
    if m == 0 {
        return Err(domain("the bound needs m >= 1"));
    }
    let prec = ctx.bits() + 32;
    let (geo, csch) = parts(t, prec);
    let mut v = geo * factorial_float(m, prec) * 2u32;
    v += csch * factorial_float(m - 1, prec) * Float::with_val(prec, t);
    Ok(finish(v, ctx))
}

/// `(m-1)! (1 - e^{-t/2}/(1-e^{-t/2}))`, a lower bound for `f_m(t)`.
pub fn f_lower_bound(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_t(t)?;
    if m == 0 {
        return Err(domain("the bound needs m >= 1"));
    }
    let prec = ctx.bits() + 32;
    let (geo, _) = parts(t, prec);
    let v = (Float::with_val(prec, 1) - geo) * factorial_float(m - 1, prec);
    Ok(finish(v, ctx))
}
