//! Laplace kernels of the remainders: the Binet kernels `f_n`, `g_n` and
//! their derivatives, the Laguerre kernel `f_m`, the sine-series kernel `s`,
//! and the bound functions used around them.

mod binet;
mod bounds;
mod laguerre_sum;
mod sine;

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

pub use binet::{BinetShape, GrowthBound};
pub use bounds::{eq_p_bound, f_lower_bound, k_bound};
pub use laguerre_sum::{laguerre_sum_f, laguerre_sum_f_prime};
pub use sine::{s_kernel, s_kernel_f64, s_kernel_prime, sin2_sum};

pub(crate) use binet::check_t;

use crate::error::{domain, unsupported, Result};
use crate::hpreal::HPReal;
use crate::precision::PrecisionContext;
use crate::quadrature::{laplace_integral, osc_log_moment, osc_sine_moment, FnKernel, QuadratureResult};
use crate::special::util::factorial_float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    BinetF,
    BinetG,
    LaguerreF,
    SKernel,
}

impl FromStr for KernelFamily {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binet-f" => Ok(Self::BinetF),
            "binet-g" => Ok(Self::BinetG),
            "laguerre-f" => Ok(Self::LaguerreF),
            "s" | "s-kernel" => Ok(Self::SKernel),
            _ => Err(domain(format!("unknown kernel family {s:?}"))),
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BinetF => "binet-f",
            Self::BinetG => "binet-g",
            Self::LaguerreF => "laguerre-f",
            Self::SKernel => "s",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    #[default]
    AutoSelect,
    SmallTSeries,
    LaguerreSum,
    IntegralRep,
    ClosedForm,
}

/// A kernel family, its index (`n` or `m`), derivative order and the
/// representation to evaluate it with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub index: u32,
    pub deriv_order: u32,
    pub representation: Representation,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, index: u32, deriv_order: u32) -> Result<Self> {
        if family == KernelFamily::LaguerreF && index == 0 {
            return Err(domain("Laguerre kernel index m must be >= 1"));
        }
        Ok(Self {
            family,
            index,
            deriv_order,
            representation: Representation::AutoSelect,
        })
    }

    pub fn with_representation(mut self, representation: Representation) -> Self {
        self.representation = representation;
        self
    }

    /// The Binet shape behind the kernel, when there is one.
    pub fn shape(&self) -> Option<BinetShape> {
        let n = self.index as i32;
        let j = self.deriv_order;
        match self.family {
            KernelFamily::BinetF => Some(BinetShape { order: n, power: 1, deriv: j }),
            KernelFamily::BinetG => Some(BinetShape { order: n, power: 0, deriv: j }),
            // f_m - (m-1)!/2 = d^(m-1)[t^m g_{-1}] for m ≥ 2.
            KernelFamily::LaguerreF if self.index >= 2 => Some(BinetShape {
                order: -1,
                power: self.index,
                deriv: self.index - 1 + j,
            }),
            _ => None,
        }
    }

    pub fn evaluate(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        use Representation::*;
        check_t(t)?;
        let rep = self.representation;
        match self.family {
            KernelFamily::BinetF | KernelFamily::BinetG => {
                let shape = self.shape().expect("Binet kernels have a shape");
                match rep {
                    AutoSelect => shape.eval(t, ctx),
                    SmallTSeries => shape.series(t, ctx),
                    ClosedForm => shape.closed_form(t, ctx),
                    IntegralRep if self.family == KernelFamily::BinetG => {
                        binet_g_deriv_integral(self.index, self.deriv_order, t, ctx).map(|r| r.value)
                    }
                    _ => Err(unsupported(format!("{rep:?} is not available for {}", self.family))),
                }
            }
            KernelFamily::LaguerreF => {
                let m = self.index;
                match (self.deriv_order, rep) {
                    (0, AutoSelect) => laguerre_kernel_f(m, t, ctx),
                    (1, AutoSelect) => laguerre_kernel_f_prime(m, t, ctx),
                    (0, LaguerreSum) => laguerre_sum_f(m, t, ctx),
                    (1, LaguerreSum) => laguerre_sum_f_prime(m, t, ctx),
                    (0, IntegralRep) => laguerre_kernel_f_integral(m, t, ctx).map(|r| r.value),
                    (_, SmallTSeries | ClosedForm) => {
                        let shape = self.shape().ok_or_else(|| unsupported("m = 1 has no series form"))?;
                        let v = if rep == SmallTSeries {
                            shape.series(t, ctx)?
                        } else {
                            shape.closed_form(t, ctx)?
                        };
                        Ok(if self.deriv_order == 0 {
                            v.add_exact(&half_factorial(m, ctx))
                        } else {
                            v
                        })
                    }
                    _ => Err(unsupported("Laguerre kernel supports derivative orders 0 and 1")),
                }
            }
            KernelFamily::SKernel => match self.deriv_order {
                0 => Ok(s_kernel(t, ctx)),
                1 => Ok(s_kernel_prime(t, ctx)),
                _ => Err(unsupported("s kernel supports derivative orders 0 and 1")),
            },
        }
    }

    /// `|k(t)| ≤ A (1+t)^p` on `(0, ∞)`; infinite when the kernel is not
    /// bounded near the origin.
    pub fn growth_bound(&self) -> GrowthBound {
        match self.family {
            KernelFamily::BinetF | KernelFamily::BinetG => self.shape().expect("shape").growth_bound(),
            KernelFamily::LaguerreF => match self.shape() {
                Some(shape) => {
                    let g = shape.growth_bound();
                    let half = factorial_float(self.index - 1, 64).to_f64() / 2.0;
                    GrowthBound {
                        coef: g.coef + if self.deriv_order == 0 { half } else { 0.0 },
                        power: g.power,
                    }
                }
                None => GrowthBound {
                    coef: f64::INFINITY,
                    power: 0,
                },
            },
            KernelFamily::SKernel => match self.deriv_order {
                0 => GrowthBound { coef: 1.2, power: 1 },
                _ => GrowthBound {
                    coef: 1.0 / 12.0,
                    power: 0,
                },
            },
        }
    }
}

fn half_factorial(m: u32, ctx: &PrecisionContext) -> Float {
    factorial_float(m - 1, ctx.bits() + 16) / 2u32
}

/// `f_n(t) = (-1)^n (1/t - coth(t/2)/2 + Σ_{k=1}^{n+1} B_2k/(2k)! t^(2k-1))`.
pub fn binet_f(n: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    BinetShape::new(n as i32, 1, 0)?.eval(t, ctx)
}

/// `g_n(t) = f_n(t)/t`.
pub fn binet_g(n: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    BinetShape::new(n as i32, 0, 0)?.eval(t, ctx)
}

/// `g_n^{(j)}(t)` for `j ≤ 2n+2`.
pub fn binet_g_deriv(n: u32, j: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_deriv(n, j)?;
    BinetShape::new(n as i32, 0, j)?.eval(t, ctx)
}

fn check_deriv(n: u32, j: u32) -> Result<()> {
    if j > 2 * n + 2 {
        return Err(unsupported(format!("g_{n} derivatives are limited to order {}, got {j}", 2 * n + 2)));
    }
    Ok(())
}

/// `g_n^{(2n)}` and `g_n^{(2n+1)}` through their oscillatory integrals.
pub fn binet_g_deriv_integral(n: u32, j: u32, t: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    check_deriv(n, j)?;
    if j == 2 * n {
        osc_log_moment(n, t, ctx)
    } else if j == 2 * n + 1 {
        osc_sine_moment(n, t, ctx)
    } else {
        Err(unsupported(format!("no integral representation for g_{n}^({j})")))
    }
}

/// `f_m(t) = d^(m-1)/dt^(m-1) [t^(m-1)/(1-e^{-t})]`: Bernoulli series below
/// `t = 1`, Laguerre sum above.
pub fn laguerre_kernel_f(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    if m == 0 {
        return Err(domain("Laguerre kernel index m must be >= 1"));
    }
    check_t(t)?;
    if m == 1 {
        let prec = ctx.bits() + 16;
        let em1 = Float::with_val(prec, -Float::with_val(prec, t)).exp_m1();
        let v = -Float::with_val(prec, em1.recip_ref());
        let e = crate::hpreal::rounding(&v) * 4.0;
        return Ok(HPReal::new(v, e));
    }
    if *t < 1 {
        let shape = BinetShape::new(-1, m, m - 1)?;
        Ok(shape.series(t, ctx)?.add_exact(&half_factorial(m, ctx)))
    } else {
        laguerre_sum_f(m, t, ctx)
    }
}

/// `f_m'(t)`.
pub fn laguerre_kernel_f_prime(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    if m == 0 {
        return Err(domain("Laguerre kernel index m must be >= 1"));
    }
    check_t(t)?;
    if m == 1 {
        // -e^{-t}/(1-e^{-t})² = -1/(4 sinh²(t/2))
        let prec = ctx.bits() + 16;
        let sh = Float::with_val(prec, Float::with_val(prec, t) / 2u32).sinh();
        let v = -Float::with_val(prec, sh.square() * 4u32).recip();
        let e = crate::hpreal::rounding(&v) * 6.0;
        return Ok(HPReal::new(v, e));
    }
    if *t < 1 {
        BinetShape::new(-1, m, m)?.series(t, ctx)
    } else {
        laguerre_sum_f_prime(m, t, ctx)
    }
}

/// `f_m(t) = ∫_0^∞ s(tu) u^(m-1) e^{-u} du`, valid for `m ≥ 2`, `t < 2π`.
pub fn laguerre_kernel_f_integral(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    if m < 2 {
        return Err(unsupported("the s-integral form needs m >= 2"));
    }
    check_t(t)?;
    if t.to_f64() >= 2.0 * std::f64::consts::PI {
        return Err(unsupported("the s-integral form needs t < 2π"));
    }
    let tf = t.to_f64();
    let t = t.clone();
    // |s(x)| ≤ 1.2 (1+x) ≤ 1.2 (1+t)(1+u)
    let kernel = FnKernel {
        f: move |u: &Float, c: &PrecisionContext| -> Result<HPReal> {
            let x = Float::with_val(c.bits() + 16, &t * u);
            let s = s_kernel(&x, c);
            let w = Float::with_val(c.bits() + 16, u.pow(m - 1));
            Ok(s.scale(&w))
        },
        growth: GrowthBound {
            coef: 1.2 * (1.0 + tf),
            power: m,
        },
    };
    laplace_integral(&kernel, &ctx.float(1), ctx)
}

/// `∫_0^t (f_m(u) - (m-1)!/2) du` by quadrature over the Laguerre kernel.
pub fn partial_integral_quadrature(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    if m < 2 {
        return Err(unsupported("the partial integral needs m >= 2"));
    }
    check_t(t)?;
    let half = half_factorial(m, ctx);
    let f = |u: &Float| -> Result<HPReal> { Ok(laguerre_kernel_f(m, u, ctx)?.add_exact(&-half.clone())) };
    let prec = ctx.bits() + 16;
    let mut points = vec![Float::with_val(prec, 0)];
    if *t > 1 {
        points.push(Float::with_val(prec, 1));
    }
    points.push(Float::with_val(prec, t));
    crate::quadrature::tanh_sinh::integrate_segments(&f, &points, ctx.quad_tol(), prec)
}

/// `P_m(t) = d^(m-2)/dt^(m-2)[t^(m-1)/(1-e^{-t})] - (m-1)! t/2 - (m-2)!`,
/// the closed form of the partial integral.
pub fn partial_integral_closed_form(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    if m < 2 {
        return Err(unsupported("the partial integral needs m >= 2"));
    }
    BinetShape::new(-1, m, m - 2)?.eval(t, ctx)
}

/// `4 ∫_0^∞ Σ_k sin²(tu/(4kπ)) u^(m-2) e^{-u} du`.
pub fn sin2_integral(m: u32, t: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    if m < 2 {
        return Err(unsupported("the sin² integral needs m >= 2"));
    }
    check_t(t)?;
    let tf = t.to_f64();
    let prec = ctx.bits() + 16;
    let scale = Float::with_val(prec, t) / (crate::special::util::pi(prec) * 4u32);
    // Σ_k sin²(b/k) ≤ 1 + 2|b| and 4(1 + 2b) ≤ 4(1+t)(1+u) with b = tu/4π.
    let kernel = FnKernel {
        f: move |u: &Float, c: &PrecisionContext| -> Result<HPReal> {
            let b = Float::with_val(prec, &scale * u);
            let s = sin2_sum(&b, c);
            let w = Float::with_val(prec, u.pow(m - 2)) * 4u32;
            Ok(s.scale(&w))
        },
        growth: GrowthBound {
            coef: 4.0 * (1.0 + tf),
            power: m - 1,
        },
    };
    laplace_integral(&kernel, &ctx.float(1), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn f_is_t_times_g() {
        let c = ctx();
        for n in 0..4 {
            for &t in &[0.1, 1.0, 5.0, 20.0] {
                let x = c.float(t);
                let f = binet_f(n, &x, &c).unwrap();
                let g = binet_g(n, &x, &c).unwrap().scale(&x);
                assert!(f.consistent_with(&g), "n={n} t={t}");
            }
        }
    }

    #[test]
    fn g0_small_t() {
        let c = ctx();
        let t = 1e-3;
        let g = binet_g(0, &c.float(t), &c).unwrap().to_f64();
        assert!((g * 720.0 / (t * t) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn laguerre_kernel_paths_agree() {
        let c = PrecisionContext::new(30).unwrap();
        for m in [2u32, 5] {
            for &t in &[0.5, 1.5] {
                let x = c.float(t);
                let series = KernelSpec::new(KernelFamily::LaguerreF, m, 0)
                    .unwrap()
                    .with_representation(Representation::SmallTSeries)
                    .evaluate(&x, &c)
                    .unwrap();
                let sum = laguerre_sum_f(m, &x, &c).unwrap();
                assert!(series.agrees_with(&sum, 1e-25), "m={m} t={t}");
                let d_series = BinetShape::new(-1, m, m).unwrap().series(&x, &c).unwrap();
                let d_sum = laguerre_sum_f_prime(m, &x, &c).unwrap();
                assert!(d_series.agrees_with(&d_sum, 1e-24), "m={m} t={t}: {d_series} {d_sum}");
            }
        }
    }

    #[test]
    fn m1_kernel() {
        let c = ctx();
        let v = laguerre_kernel_f(1, &c.float(1), &c).unwrap().to_f64();
        assert!((v - 1.5819767068693265).abs() < 1e-15);
        let d = laguerre_kernel_f_prime(1, &c.float(2), &c).unwrap().to_f64();
        let e = (-2f64).exp();
        assert!((d + e / (1.0 - e).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn deriv_limit() {
        let c = ctx();
        assert!(binet_g_deriv(1, 5, &c.float(1), &c).is_err());
        assert!(binet_g_deriv(1, 4, &c.float(1), &c).is_ok());
    }
}
