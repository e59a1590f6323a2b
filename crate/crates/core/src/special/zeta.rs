//! Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (k+q)^-s` for integer `s ≥ 2` and integer
//! `q ≥ 1`, by Euler–Maclaurin summation.
//!
//! `x^-s` is completely monotonic, so the Euler–Maclaurin remainder is
//! bounded by the first omitted correction term.

use rug::ops::Pow;
use rug::Float;

use super::bernoulli::bernoulli_over_factorial;
use crate::error::{domain, Result};
use crate::hpreal::{abs_up, sum_bounds, HPReal};
use crate::precision::PrecisionContext;

/// `ζ(s, q)` at working precision.
pub fn hurwitz_zeta(s: u32, q: u64, ctx: &PrecisionContext) -> Result<HPReal> {
    if s < 2 {
        return Err(domain(format!("hurwitz_zeta needs s >= 2, got {s}")));
    }
    if q == 0 {
        return Err(domain("hurwitz_zeta needs q >= 1"));
    }
    Ok(hurwitz_zeta_batch(&[s], q, ctx.bits()).remove(0))
}

/// `ζ(s, q)` for every `s` in `exponents`, sharing the cutoff `M`.
pub(crate) fn hurwitz_zeta_batch(exponents: &[u32], q: u64, prec: u32) -> Vec<HPReal> {
    let s_max = exponents.iter().copied().max().unwrap_or(2) as u64;
    let mut m = q.max((0.12 * prec as f64) as u64 + s_max / 4 + 8);
    loop {
        if let Some(v) = batch_with_cutoff(exponents, q, m, prec) {
            return v;
        }
        m *= 2;
    }
}

fn batch_with_cutoff(exponents: &[u32], q: u64, m: u64, prec: u32) -> Option<Vec<HPReal>> {
    let wp = prec + 16;
    let u = 2f64.powi(1 - wp as i32);
    let rel_tol = 2f64.powi(-(prec as i32) - 4);
    let mf = Float::with_val(wp, m);
    let inv_m = Float::with_val(wp, mf.recip_ref());
    let inv_m2 = Float::with_val(wp, inv_m.clone().square());

    let mut out = Vec::with_capacity(exponents.len());
    for &s in exponents {
        assert!(s >= 2);
        let mut direct = Float::new(wp);
        for k in q..m {
            direct += Float::with_val(wp, k).pow(s).recip();
        }
        let m_pow = Float::with_val(wp, inv_m.clone().pow(s)); // M^-s
        let integral = Float::with_val(wp, &m_pow * &mf) / (s - 1);
        let half = Float::with_val(wp, &m_pow / 2u32);
        let mut sum = direct + &integral + &half;
        let scale = abs_up(&sum);
        // Magnitudes are compared as floats: far below f64 range they would
        // all round up to the same subnormal.
        let limit = Float::with_val(53, sum.abs_ref()) * rel_tol;

        // Corrections B_2j/(2j)! (s)_{2j-1} M^{-s-2j+1}.
        let mut rising = Float::with_val(wp, s); // (s)_{2j-1}
        let mut pow = Float::with_val(wp, &m_pow * &inv_m); // M^{-s-1}
        let mut prev: Option<Float> = None;
        let mut omitted = None;
        let mut terms = 0.0;
        for j in 1u32.. {
            let term = bernoulli_over_factorial(2 * j as usize, wp) * &rising * &pow;
            let mag = Float::with_val(53, term.abs_ref());
            if mag <= limit {
                omitted = Some(abs_up(&mag));
                break;
            }
            if prev.as_ref().is_some_and(|p| mag >= *p) {
                break;
            }
            terms += abs_up(&mag);
            prev = Some(mag);
            sum += &term;
            rising *= (s + 2 * j - 1) as f64 * (s + 2 * j) as f64;
            pow *= &inv_m2;
        }
        let trunc = omitted?;
        let round = u * (scale * ((m - q.min(m)) as f64 + 8.0) + terms * 8.0);
        out.push(HPReal::new(sum, sum_bounds(&[trunc, round])));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    #[test]
    fn riemann_values() {
        let ctx = PrecisionContext::default();
        let pi = Float::with_val(256, Constant::Pi);
        let z2 = hurwitz_zeta(2, 1, &ctx).unwrap();
        let expect = Float::with_val(256, pi.clone().square()) / 6u32;
        assert!(z2.agrees_with(&HPReal::exact(expect), 1e-48));
        let z4 = hurwitz_zeta(4, 1, &ctx).unwrap();
        let expect = Float::with_val(256, pi.clone().pow(4u32)) / 90u32;
        assert!(z4.agrees_with(&HPReal::exact(expect), 1e-48));
    }

    #[test]
    fn shift_relation() {
        // ζ(s, q) = q^-s + ζ(s, q+1)
        let ctx = PrecisionContext::default();
        for s in [2u32, 3, 8, 31] {
            for q in [1u64, 7, 200] {
                let a = hurwitz_zeta(s, q, &ctx).unwrap();
                let b = hurwitz_zeta(s, q + 1, &ctx).unwrap();
                let head = Float::with_val(256, q).pow(s).recip();
                let rhs = b.add_exact(&head);
                let tol = 1e-45 * abs_up(a.value());
                assert!(a.agrees_with(&rhs, tol), "s={s} q={q}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let ctx = PrecisionContext::default();
        assert!(hurwitz_zeta(1, 1, &ctx).is_err());
        assert!(hurwitz_zeta(2, 0, &ctx).is_err());
    }

    #[test]
    fn tiny_values_at_large_shift() {
        // ζ(120, 5585) is far below the f64 range.
        let v = hurwitz_zeta_batch(&[2, 40, 120], 5585, 256);
        let expect = 1.0 / 5584.5;
        assert!((v[0].to_f64() - expect).abs() < 1e-7 * expect);
        assert!(*v[2].value() > 0 && v[2].to_f64() == 0.0);
    }

}
