//! Remainders of Stirling's series
//! `R_n(x) = (-1)^n [log Γ(x) - (x-1/2) log x + x - log(2π)/2 - Σ_{k=1}^n a_k x^{1-2k}]`,
//! `a_k = B_2k/(2k(2k-1))`, and their derivatives.
//!
//! The closed form cancels about `(2n+m+1) |log10 x|` digits, which is paid
//! for with extra precision; the Laplace form `R_n = ∫ g_{n-1}(t) e^{-xt} dt`
//! has no cancellation and takes over for large `x`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::hpreal::{rounding, sum_bounds, HPReal};
use crate::kernels::BinetShape;
use crate::precision::PrecisionContext;
use crate::quadrature::{laplace_integral, QuadratureResult};
use crate::special::util::{factorial_float, pi};
use crate::special::{log_gamma, polygamma, with_bernoulli};

/// Closed form below this point, Laplace integral above (for `n ≥ 1`).
pub const LAPLACE_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalPath {
    #[default]
    AutoSelect,
    ClosedForm,
    LaplaceIntegral,
}

/// `(-1)^m R_n^{(m)}` evaluated along `eval_path`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RemainderSpec {
    pub n: u32,
    pub m: u32,
    pub eval_path: EvalPath,
}

impl RemainderSpec {
    pub fn new(n: u32, m: u32) -> Self {
        Self {
            n,
            m,
            eval_path: EvalPath::AutoSelect,
        }
    }

    pub fn with_path(mut self, path: EvalPath) -> Self {
        self.eval_path = path;
        self
    }

    pub fn evaluate(&self, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        if self.m == 0 {
            remainder_with_path(self.n, x, self.eval_path, ctx)
        } else {
            match self.eval_path {
                EvalPath::LaplaceIntegral => remainder_deriv_via_laplace(self.n, self.m, x, ctx).map(|r| r.value),
                _ => remainder_deriv(self.n, self.m, x, ctx),
            }
        }
    }
}

impl fmt::Display for RemainderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "R{}", self.n)
        } else {
            write!(f, "R{}^({})", self.n, self.m)
        }
    }
}

impl FromStr for RemainderSpec {
    type Err = crate::error::Error;

    /// Parses `R2` or `R1^(3)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || domain(format!("cannot parse remainder target {s:?}"));
        let rest = s.strip_prefix('R').ok_or_else(bad)?;
        let (n, m) = match rest.split_once("^(") {
            Some((n, m)) => (n, m.strip_suffix(')').ok_or_else(bad)?),
            None => (rest, "0"),
        };
        Ok(Self::new(n.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?))
    }
}

fn check_x(x: &Float) -> Result<()> {
    if !x.is_finite() || *x <= 0 {
        return Err(domain(format!("x must be positive, got {}", x.to_f64())));
    }
    Ok(())
}

/// Context with enough extra digits to absorb the closed-form cancellation.
fn raised(ctx: &PrecisionContext, n: u32, m: u32, x: &Float) -> Result<PrecisionContext> {
    let lg = x.to_f64().log10().abs();
    let extra = ((2 * n + m + 1) as f64 * lg).ceil() as u32 + 10;
    PrecisionContext::new((ctx.working_digits() + extra).min(PrecisionContext::MAX_DIGITS))
}

/// `a_k = B_2k / (2k (2k-1))`.
fn stirling_coef(k: u32, prec: u32) -> Float {
    with_bernoulli(2 * k as usize, |b| {
        let q = b / Rational::from((2 * k) * (2 * k - 1));
        Float::with_val(prec, &q)
    })
}

/// `R_n(x)`, closed form for `n = 0` or `x ≤ 10`, Laplace integral otherwise.
pub fn remainder(n: u32, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    remainder_with_path(n, x, EvalPath::AutoSelect, ctx)
}

pub fn remainder_with_path(n: u32, x: &Float, path: EvalPath, ctx: &PrecisionContext) -> Result<HPReal> {
    check_x(x)?;
    match path {
        EvalPath::ClosedForm => remainder_closed_form(n, x, ctx),
        EvalPath::LaplaceIntegral => remainder_via_laplace(n, x, ctx),
        EvalPath::AutoSelect => {
            if n == 0 || *x <= LAPLACE_THRESHOLD {
                remainder_closed_form(n, x, ctx)
            } else {
                remainder_via_laplace(n, x, ctx)
            }
        }
    }
}

fn remainder_closed_form(n: u32, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_x(x)?;
    let hi = raised(ctx, n, 0, x)?;
    let prec = hi.bits() + 16;
    let x = Float::with_val(prec, x);
    let lg = log_gamma(&x, &hi)?;
    let lnx = Float::with_val(prec, x.ln_ref());
    let half_ln_2pi = Float::with_val(prec, pi(prec) * 2u32).ln() / 2u32;

    let mut parts: Vec<Float> = vec![
        -Float::with_val(prec, Float::with_val(prec, &x - 0.5) * &lnx),
        x.clone(),
        -half_ln_2pi,
    ];
    for k in 1..=n {
        let p = Float::with_val(prec, (&x).pow(1 - 2 * k as i32));
        parts.push(-(stirling_coef(k, prec) * p));
    }
    let mut v = lg.value().clone();
    let mut round = 0.0;
    for p in &parts {
        round += 4.0 * rounding(p);
        v += p;
    }
    round += rounding(&v);
    if n % 2 == 1 {
        v = -v;
    }
    let e = sum_bounds(&[lg.err_bound(), round]);
    Ok(HPReal::new(v, e).with_prec(ctx.bits() + 16))
}

/// `R_n(x) = ∫_0^∞ g_{n-1}(t) e^{-xt} dt` for `n ≥ 1`.
pub fn remainder_via_laplace(n: u32, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    if n == 0 {
        return Err(domain("the Laplace path needs n >= 1"));
    }
    check_x(x)?;
    let shape = BinetShape::new(n as i32 - 1, 0, 0)?;
    Ok(laplace_integral(&shape, x, ctx)?.value)
}

/// `(-1)^m R_n^{(m)}(x) = ∫_0^∞ t^m g_{n-1}(t) e^{-xt} dt`.
pub fn remainder_deriv_via_laplace(n: u32, m: u32, x: &Float, ctx: &PrecisionContext) -> Result<QuadratureResult> {
    check_x(x)?;
    let shape = BinetShape::new(n as i32 - 1, m, 0)?;
    laplace_integral(&shape, x, ctx)
}

/// `(-1)^m R_n^{(m)}(x)` assembled from `ψ^{(m-1)}` and the differentiated
/// power terms.
pub fn remainder_deriv(n: u32, m: u32, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_x(x)?;
    if m == 0 {
        return remainder(n, x, ctx);
    }
    let hi = raised(ctx, n, m, x)?;
    let prec = hi.bits() + 16;
    let x = Float::with_val(prec, x);
    let psi = polygamma(m - 1, &x, &hi)?;
    let inv = Float::with_val(prec, x.recip_ref());

    // v accumulates the bracket; the overall sign is applied at the end.
    let mut parts: Vec<Float> = Vec::new();
    let sign_m = if m.is_multiple_of(2) { 1i32 } else { -1 };
    let mut v = Float::with_val(prec, psi.value() * sign_m);
    if m == 1 {
        // -R_n' = -(-1)^n [ψ - log x + 1/(2x) + Σ B_2k/(2k) x^{-2k}]
        parts.push(-Float::with_val(prec, x.ln_ref()));
        parts.push(Float::with_val(prec, &inv / 2u32));
        for k in 1..=n {
            let b = with_bernoulli(2 * k as usize, |b| Float::with_val(prec, b)) / (2 * k);
            parts.push(b * Float::with_val(prec, (&inv).pow(2 * k)));
        }
        v = -v; // v held -ψ
    } else {
        parts.push(-(factorial_float(m - 2, prec) * Float::with_val(prec, (&inv).pow(m - 1))));
        parts.push(-(factorial_float(m - 1, prec) * Float::with_val(prec, (&inv).pow(m)) / 2u32));
        for k in 1..=n {
            let c = stirling_coef(k, prec) * factorial_float(2 * k + m - 2, prec) / factorial_float(2 * k - 2, prec);
            parts.push(-(c * Float::with_val(prec, (&inv).pow(2 * k + m - 1))));
        }
    }
    let mut round = 0.0;
    for p in &parts {
        round += 6.0 * rounding(p);
        v += p;
    }
    round += rounding(&v);
    let e = sum_bounds(&[psi.err_bound(), round]);
    let negate = (n % 2 == 1) != (m == 1);
    if negate {
        v = -v;
    }
    Ok(HPReal::new(v, e).with_prec(ctx.bits() + 16))
}

/// `-x R_n'(x) / R_n(x)`: any `α` with `x^α R_n(x)` completely monotonic is
/// at most this value at every `x`.
pub fn ratio_bound(n: u32, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_x(x)?;
    let d = remainder_deriv(n, 1, x, ctx)?;
    let r = remainder(n, x, ctx)?;
    let num = d.scale(x);
    if !r.certainly_positive() {
        return Err(domain(format!("R_{n}({}) is not certified positive", x.to_f64())));
    }
    Ok(&num / &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn golden_values() {
        let c = ctx();
        let r0 = remainder(0, &c.float(1), &c).unwrap();
        assert!((r0.to_f64() - 0.0810614667953272).abs() < 1e-15);
        let r1 = remainder(1, &c.float(1), &c).unwrap();
        assert!((r1.to_f64() - (1.0 / 12.0 - 0.0810614667953272)).abs() < 1e-15);
        let r = remainder(0, &c.float(10), &c).unwrap().to_f64();
        assert!((r - 1.0 / 120.0).abs() < 3e-6);
    }

    #[test]
    fn paths_agree() {
        let c = ctx();
        for n in 1..=3 {
            for &x in &[0.5, 5.0, 20.0] {
                let xf = c.float(x);
                let a = remainder_with_path(n, &xf, EvalPath::ClosedForm, &c).unwrap();
                let b = remainder_with_path(n, &xf, EvalPath::LaplaceIntegral, &c).unwrap();
                assert!(a.agrees_with(&b, 1e-35), "n={n} x={x}: {a} {b}");
            }
        }
    }

    #[test]
    fn derivative_paths_agree() {
        let c = ctx();
        for n in 0..=3 {
            for m in 1..=4 {
                for &x in &[0.7, 3.0] {
                    let xf = c.float(x);
                    let a = remainder_deriv(n, m, &xf, &c).unwrap();
                    let b = remainder_deriv_via_laplace(n, m, &xf, &c).unwrap().value;
                    assert!(a.agrees_with(&b, 1e-35), "n={n} m={m} x={x}: {a} {b}");
                    assert!(a.certainly_positive());
                }
            }
        }
    }

    #[test]
    fn parses_targets() {
        assert_eq!("R2".parse::<RemainderSpec>().unwrap(), RemainderSpec::new(2, 0));
        assert_eq!("R1^(3)".parse::<RemainderSpec>().unwrap(), RemainderSpec::new(1, 3));
        assert!("Q2".parse::<RemainderSpec>().is_err());
    }
}
