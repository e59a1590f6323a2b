//! `∫_0^∞ k(t) e^{-xt} dt` with a certified truncation point.

use rug::Float;

use super::tanh_sinh::integrate_segments;
use super::QuadratureResult;
use crate::error::{domain, unsupported, Result};
use crate::hpreal::{abs_up, rounding, sum_bounds, HPReal};
use crate::kernels::{BinetShape, GrowthBound, KernelSpec};
use crate::precision::PrecisionContext;

const SEGMENT: f64 = 4.0;

/// A kernel that can be integrated against `e^{-xt}` on `(0, ∞)`.
pub trait LaplaceKernel: Sync {
    fn eval(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal>;

    /// `|k(t)| ≤ A (1+t)^p` for all `t > 0`.
    fn growth_bound(&self) -> GrowthBound;
}

impl LaplaceKernel for BinetShape {
    fn eval(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        BinetShape::eval(self, t, ctx)
    }

    fn growth_bound(&self) -> GrowthBound {
        BinetShape::growth_bound(self)
    }
}

impl LaplaceKernel for KernelSpec {
    fn eval(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        self.evaluate(t, ctx)
    }

    fn growth_bound(&self) -> GrowthBound {
        KernelSpec::growth_bound(self)
    }
}

/// `k(t) ≡ c`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantKernel(pub f64);

impl LaplaceKernel for ConstantKernel {
    fn eval(&self, _t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        Ok(HPReal::exact(ctx.float(self.0)))
    }

    fn growth_bound(&self) -> GrowthBound {
        GrowthBound {
            coef: self.0.abs(),
            power: 0,
        }
    }
}

/// Pointwise sum of two kernels.
#[derive(Debug, Clone, Copy)]
pub struct SumKernel<A, B>(pub A, pub B);

impl<A: LaplaceKernel, B: LaplaceKernel> LaplaceKernel for SumKernel<A, B> {
    fn eval(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        Ok(&self.0.eval(t, ctx)? + &self.1.eval(t, ctx)?)
    }

    fn growth_bound(&self) -> GrowthBound {
        let (a, b) = (self.0.growth_bound(), self.1.growth_bound());
        GrowthBound {
            coef: a.coef + b.coef,
            power: a.power.max(b.power),
        }
    }
}

/// A closure kernel with a caller-supplied growth bound.
pub struct FnKernel<F> {
    pub f: F,
    pub growth: GrowthBound,
}

impl<F> LaplaceKernel for FnKernel<F>
where
    F: Fn(&Float, &PrecisionContext) -> Result<HPReal> + Sync,
{
    fn eval(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        (self.f)(t, ctx)
    }

    fn growth_bound(&self) -> GrowthBound {
        self.growth
    }
}

/// `A ∫_T^∞ (1+t)^p e^{-xt} dt ≤ A e^{-xT} (1+T)^p / (x - p/(1+T))`.
fn tail_bound(g: GrowthBound, x: f64, t: f64) -> f64 {
    let p = g.power as f64;
    let rate = x - p / (1.0 + t);
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    (g.coef.ln() - x * t + p * (1.0 + t).ln() - rate.ln()).exp()
}

/// `∫_0^∞ k(t) e^{-xt} dt`.
pub fn laplace_integral<K: LaplaceKernel + ?Sized>(
    kernel: &K,
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<QuadratureResult> {
    if !x.is_finite() || *x <= 0 {
        return Err(domain(format!("Laplace variable must be positive, got {}", x.to_f64())));
    }
    let xf = x.to_f64();
    let growth = kernel.growth_bound();
    if !growth.coef.is_finite() {
        return Err(unsupported("kernel has no polynomial growth bound on (0, ∞)"));
    }
    let target = ctx.quad_tol() * 1e-2;
    let mut cut = 1.0;
    while tail_bound(growth, xf, cut) > target {
        cut *= 1.1;
    }
    let tail = tail_bound(growth, xf, cut);

    let prec = ctx.bits() + 16;
    let segments = (cut / SEGMENT).ceil().max(1.0) as usize;
    let points: Vec<Float> = (0..=segments)
        .map(|i| Float::with_val(prec, cut * i as f64 / segments as f64))
        .collect();
    let x = Float::with_val(prec, x);
    let integrand = |t: &Float| -> Result<HPReal> {
        let k = kernel.eval(t, ctx)?;
        let w = Float::with_val(prec, -Float::with_val(prec, &x * t)).exp();
        let v = Float::with_val(prec, k.value() * &w);
        let e = sum_bounds(&[k.err_bound() * abs_up(&w), 4.0 * rounding(&v)]);
        Ok(HPReal::new(v, e))
    };
    let r = integrate_segments(&integrand, &points, ctx.quad_tol() * 0.98, prec)?;
    Ok(r.widen(tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_kernel() {
        let ctx = PrecisionContext::default();
        let r = laplace_integral(&ConstantKernel(1.0), &ctx.float(2), &ctx).unwrap();
        assert!(r.value.agrees_with(&HPReal::exact(ctx.float(0.5)), 1e-40));
        assert!(r.converged);
        // Refinement differences shrink at least geometrically once resolved.
        let d = &r.differences;
        assert!(d.windows(2).skip(1).all(|w| w[1] <= w[0] || w[1] < 1e-45));
    }

    #[test]
    fn growth_bounded_tail() {
        let g = GrowthBound { coef: 2.0, power: 3 };
        assert!(tail_bound(g, 0.5, 3.0).is_infinite() || tail_bound(g, 0.5, 3.0) > 0.0);
        assert!(tail_bound(g, 1.0, 200.0) < 1e-70);
    }
}
