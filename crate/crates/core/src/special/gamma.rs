//! `log Γ` and the polygamma functions for positive real arguments.
//!
//! Both shift the argument upwards with the functional equation and then sum
//! the Stirling-type asymptotic series, whose truncation error is bounded by
//! the first omitted term for real arguments.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complete, Float, Integer};

use super::bernoulli::with_bernoulli;
use crate::error::{domain, Result};
use crate::hpreal::{abs_up, sum_bounds, HPReal};
use crate::precision::PrecisionContext;

const EXTRA_BITS: u32 = 32;

fn check_positive(x: &Float, what: &str) -> Result<()> {
    if !x.is_finite() || *x <= 0 {
        return Err(domain(format!("{what} needs x > 0, got {}", x.to_f64())));
    }
    Ok(())
}

/// Shift target: the asymptotic series reaches `10^-(D+5)` well before its
/// terms start to grow once the argument exceeds this.
fn base_shift(ctx: &PrecisionContext) -> u64 {
    ((2 * ctx.working_digits()).div_ceil(3)).max(10) as u64
}

fn target_tol(ctx: &PrecisionContext) -> f64 {
    ctx.series_tol() * 1e-10
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive(x, "log_gamma")?;
    let mut shift_floor = base_shift(ctx);
    loop {
        if let Some(v) = log_gamma_with_shift(x, ctx, shift_floor) {
            return Ok(v);
        }
        shift_floor *= 2;
    }
}

fn log_gamma_with_shift(x: &Float, ctx: &PrecisionContext, floor: u64) -> Option<HPReal> {
    let prec = ctx.bits() + EXTRA_BITS;
    let u = 2f64.powi(1 - prec as i32);
    let tol = target_tol(ctx);
    let x = Float::with_val(prec, x);

    let shift: u64 = if x >= floor {
        0
    } else {
        let gap = Float::with_val(53, floor as f64 - &x).ceil();
        gap.to_f64() as u64
    };
    let y = Float::with_val(prec, &x + shift);

    // Stirling main part.
    let ln_y = y.clone().ln();
    let half_ln_2pi = (Float::with_val(prec, Constant::Pi) * 2u32).ln() / 2u32;
    let main = Float::with_val(prec, &y - 0.5f64) * &ln_y - &y + &half_ln_2pi;

    let inv_y2 = Float::with_val(prec, y.clone().square().recip());
    let mut pow = Float::with_val(prec, y.clone().recip());
    let mut series = Float::new(prec);
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut omitted = None;
    for k in 1u64.. {
        let coef = with_bernoulli(2 * k as usize, |b| Float::with_val(prec, b));
        let term = coef / ((2 * k) * (2 * k - 1)) * &pow;
        let mag = abs_up(&term);
        if mag <= tol {
            omitted = Some(mag);
            break;
        }
        if mag >= prev {
            break;
        }
        prev = mag;
        abs_sum += mag;
        series += &term;
        pow *= &inv_y2;
    }
    let trunc = omitted?;

    // log Γ(x) = log Γ(x + K) - log(x (x+1) ... (x+K-1)).
    let mut prod = Float::with_val(prec, 1);
    for j in 0..shift {
        prod *= Float::with_val(prec, &x + j);
    }
    let ln_prod = prod.ln();
    let value = main + series - &ln_prod;

    let scale = abs_up(&y) * (abs_up(&ln_y) + 1.0) + abs_up(&ln_prod) + abs_sum + 2.0;
    let round = scale * u * (shift as f64 + 64.0);
    Some(HPReal::new(value, sum_bounds(&[trunc, round])))
}

/// `ψ^(order)(x)` for `x > 0`; order 0 is the digamma function.
pub fn polygamma(order: u32, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    check_positive(x, "polygamma")?;
    let mut shift_floor = base_shift(ctx) + order as u64;
    loop {
        if let Some(v) = polygamma_with_shift(order, x, ctx, shift_floor) {
            return Ok(v);
        }
        shift_floor *= 2;
    }
}

fn polygamma_with_shift(n: u32, x: &Float, ctx: &PrecisionContext, floor: u64) -> Option<HPReal> {
    let prec = ctx.bits() + EXTRA_BITS + 2 * n;
    let u = 2f64.powi(1 - prec as i32);
    let x = Float::with_val(prec, x);
    let shift: u64 = if x >= floor {
        0
    } else {
        Float::with_val(53, floor as f64 - &x).ceil().to_f64() as u64
    };
    let y = Float::with_val(prec, &x + shift);
    let inv_y = Float::with_val(prec, y.clone().recip());
    let inv_y2 = Float::with_val(prec, inv_y.clone().square());

    // Relative target: the asymptotic part scales like y^-n.
    let lead = if n == 0 {
        abs_up(&Float::with_val(prec, y.clone().ln())).max(1.0)
    } else {
        abs_up(&inv_y).powi(n as i32)
    };
    let tol = target_tol(ctx) * lead.min(1.0);

    // Bracketed asymptotic sum; the overall sign is applied at the end.
    let head;
    let mut pow; // y^-(2k+n) for the current k
    if n == 0 {
        head = Float::with_val(prec, y.clone().ln()) - Float::with_val(prec, &inv_y / 2u32);
        pow = inv_y2.clone();
    } else {
        let nm1 = Float::with_val(prec, Integer::factorial(n - 1).complete());
        let nf = Float::with_val(prec, Integer::factorial(n).complete());
        let yn = Float::with_val(prec, inv_y.clone().pow(n));
        head = Float::with_val(prec, &nm1 * &yn) + Float::with_val(prec, &nf * &yn) * &inv_y / 2u32;
        pow = Float::with_val(prec, &yn * &inv_y2);
    }
    let mut abs_sum = abs_up(&head);
    let mut series = Float::new(prec);
    let mut prev = f64::INFINITY;
    let mut omitted = None;
    for k in 1u32.. {
        // n = 0: -B_2k/(2k); n >= 1: B_2k (2k+1)...(2k+n-1).
        let mut coef = with_bernoulli(2 * k as usize, |b| Float::with_val(prec, b));
        if n == 0 {
            coef = -coef / (2 * k);
        } else {
            for q in 1..n {
                coef *= 2 * k + q;
            }
        }
        let term = coef * &pow;
        let mag = abs_up(&term);
        if mag <= tol {
            omitted = Some(mag);
            break;
        }
        if mag >= prev {
            break;
        }
        prev = mag;
        abs_sum += mag;
        series += &term;
        pow *= &inv_y2;
    }
    let trunc = omitted?;
    let mut asym = head + series;
    if n.is_multiple_of(2) && n > 0 {
        asym = -asym;
    }

    // ψ^(n)(x) = ψ^(n)(x+K) - (-1)^n n! Σ_{j<K} (x+j)^-(n+1).
    let mut shift_sum = Float::new(prec);
    for j in 0..shift {
        let base = Float::with_val(prec, &x + j);
        shift_sum += base.pow(n + 1).recip();
    }
    let nf = Float::with_val(prec, Integer::factorial(n).complete());
    shift_sum *= &nf;
    let shift_abs = abs_up(&shift_sum);
    let value = if n.is_multiple_of(2) {
        asym - shift_sum
    } else {
        asym + shift_sum
    };

    let round = u * ((abs_sum + 1.0) * 64.0 + shift_abs * (shift as f64 + n as f64 + 8.0));
    Some(HPReal::new(value, sum_bounds(&[trunc, round])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn f(v: f64) -> Float {
        Float::with_val(256, v)
    }

    #[test]
    fn log_gamma_golden_values() {
        let c = ctx();
        let one = log_gamma(&f(1.0), &c).unwrap();
        assert!(abs_up(one.value()) <= 1e-45);

        let half = log_gamma(&f(0.5), &c).unwrap();
        let expect = Float::with_val(256, Constant::Pi).ln() / 2u32;
        assert!(half.agrees_with(&HPReal::exact(expect), 1e-45));

        let ten = log_gamma(&f(10.0), &c).unwrap();
        let fact = Float::with_val(256, Integer::factorial(9).complete()).ln();
        assert!(ten.agrees_with(&HPReal::exact(fact), 1e-40));
        assert!(ten.err_bound() <= 1e-45);
        assert!(ten.to_string_digits(22).starts_with("12.80182748008146961"));
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(&f(0.0), &ctx()).is_err());
        assert!(log_gamma(&f(-1.5), &ctx()).is_err());
        assert!(polygamma(0, &f(0.0), &ctx()).is_err());
    }

    #[test]
    fn duplication_identity() {
        let c = ctx();
        let ln2 = Float::with_val(256, Constant::Log2);
        let ln_pi = Float::with_val(256, Constant::Pi).ln();
        for &xv in &[0.05, 0.3, 1.0, 2.5, 7.0, 33.3, 150.0] {
            let x = f(xv);
            let lhs = log_gamma(&Float::with_val(256, &x * 2u32), &c).unwrap();
            let a = log_gamma(&x, &c).unwrap();
            let b = log_gamma(&Float::with_val(256, &x + 0.5f64), &c).unwrap();
            let extra = (Float::with_val(256, &x * 2u32) - 1u32) * &ln2 - Float::with_val(256, &ln_pi / 2u32);
            let rhs = (&a + &b).add_exact(&extra);
            assert!(lhs.consistent_with(&rhs), "x = {xv}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn polygamma_recurrence() {
        let c = ctx();
        for x in [c.parse_real("1/2").unwrap(), f(1.0), c.parse_real("7/3").unwrap()] {
            let a = polygamma(0, &Float::with_val(256, &x + 1u32), &c).unwrap();
            let b = polygamma(0, &x, &c).unwrap();
            let d = &a - &b;
            let inv = HPReal::exact(Float::with_val(256, x.recip_ref()));
            assert!(d.agrees_with(&inv, d.err_bound() + 1e-44));
        }
    }

    #[test]
    fn polygamma_golden_values() {
        let c = ctx();
        let trigamma = polygamma(1, &f(1.0), &c).unwrap();
        let pi2_6 = Float::with_val(256, Constant::Pi).square() / 6u32;
        assert!(trigamma.agrees_with(&HPReal::exact(pi2_6), 1e-44));

        let digamma = polygamma(0, &f(1.0), &c).unwrap();
        let euler = -Float::with_val(256, Constant::Euler);
        assert!(digamma.agrees_with(&HPReal::exact(euler), 1e-44));
        assert!(digamma.to_string_digits(20).starts_with("-0.5772156649015328"));
    }

    // ψ^(n)(1) = (-1)^(n+1) n! ζ(n+1), with ζ summed directly for n = 5.
    #[test]
    fn higher_orders_match_zeta_values() {
        let c = ctx();
        let v = polygamma(5, &f(1.0), &c).unwrap();
        let mut z = Float::with_val(256, 0);
        for k in 1..=200_000u32 {
            z += Float::with_val(256, k).pow(6u32).recip();
        }
        let expect = z * 120u32;
        assert!((v.to_f64() - expect.to_f64()).abs() < 1e-14 * expect.to_f64());
        let v3 = polygamma(3, &f(0.25), &c).unwrap();
        let v3s = polygamma(3, &f(1.25), &c).unwrap();
        let step = Float::with_val(256, 0.25f64).pow(4u32).recip() * 6u32;
        let rhs = v3s.add_exact(&step);
        assert!(v3.consistent_with(&rhs));
    }

    #[test]
    fn large_arguments_skip_the_shift() {
        let c = ctx();
        let x = f(1e6);
        let lg = log_gamma(&x, &c).unwrap();
        let lg1 = log_gamma(&Float::with_val(256, &x + 1u32), &c).unwrap();
        let d = &lg1 - &lg;
        assert!(d.agrees_with(&HPReal::exact(x.clone().ln()), 1e-38));
    }
}
