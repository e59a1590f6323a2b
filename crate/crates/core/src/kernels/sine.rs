//! The sine-series kernel `s(t) = 1/2 + (1/π) Σ_k sin(t/(2kπ))/k`, its
//! derivative, and `Σ_k sin²(b/k)`.
//!
//! The first `K ≥ |a|` terms (`a = t/2π`) are summed directly; the rest is
//! expanded in powers of `a/k` and collapsed with Hurwitz zeta values
//! `ζ(2i, K+1)`, which are cached per `(precision, K)`.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, LazyLock, Mutex};

use rug::float::Constant;
use rug::Float;

use super::binet::round_prec;
use crate::hpreal::{abs_up, sum_bounds, HPReal};
use crate::precision::PrecisionContext;
use crate::special::hurwitz_zeta_batch;
use crate::special::util::ln_factorial;

/// `ζ(2i, K+1)` for `i = 1..=J+1`, stored at index `i - 1`.
type ZetaTable = Arc<Vec<HPReal>>;

static ZETA: LazyLock<Mutex<HashMap<(u32, u64), ZetaTable>>> = LazyLock::new(Default::default);

fn zeta_table(prec: u32, k: u64) -> ZetaTable {
    if let Some(t) = ZETA.lock().expect("zeta cache poisoned").get(&(prec, k)) {
        return t.clone();
    }
    let target = (prec as f64 + 16.0) * LN_2 + (k as f64).ln() + 5.0;
    let mut j = 1u64;
    while ln_factorial(2 * j) <= target {
        j += 1;
    }
    let exps: Vec<u32> = (1..=j as u32 + 1).map(|i| 2 * i).collect();
    let table = Arc::new(hurwitz_zeta_batch(&exps, k + 1, prec));
    ZETA.lock()
        .expect("zeta cache poisoned")
        .entry((prec, k))
        .or_insert(table)
        .clone()
}

fn cutoff(x: f64) -> u64 {
    let k = x.abs().ceil() as u64;
    k.div_ceil(16).max(1) * 16
}

fn working_prec(ctx: &PrecisionContext, a: f64) -> u32 {
    round_prec(ctx.bits() + 16 + (a.abs() + 1.0).log2().ceil() as u32)
}

/// `ζ(s, K+1) ≤ K^{1-s}/(s-1)`.
fn zeta_tail_majorant(s: f64, k: f64) -> f64 {
    ((1.0 - s) * k.ln() - (s - 1.0).ln()).exp()
}

/// Sums `Σ_i c_i ζ(2i+shift, K+1)` for the power-series coefficients `c_i`
/// produced by `coef`, stopping at the first negligible term.
///
/// The terms alternate and decrease in magnitude, so the first omitted term
/// bounds the truncation.
fn zeta_series(
    zetas: &[HPReal],
    first: usize,
    mut coef: impl FnMut(usize) -> Float,
    majorant: impl Fn(usize) -> f64,
    tol: f64,
) -> (Float, f64) {
    let prec = zetas[0].prec();
    let mut sum = Float::new(prec);
    let mut err = 0.0;
    for (i, z) in zetas.iter().enumerate().skip(first) {
        let c = coef(i);
        let term = Float::with_val(prec, &c * z.value());
        err += abs_up(&c) * z.err_bound() + 2.0 * abs_up(&term) * 2f64.powi(1 - prec as i32);
        sum += &term;
        if majorant(i + 1) < tol {
            return (sum, sum_bounds(&[err, majorant(i + 1)]));
        }
    }
    let last = majorant(zetas.len());
    (sum, sum_bounds(&[err, last]))
}

/// `s(t)`.
pub fn s_kernel(t: &Float, ctx: &PrecisionContext) -> HPReal {
    let tf = t.to_f64();
    let a_f = tf / (2.0 * PI);
    let prec = working_prec(ctx, a_f);
    let u = 2f64.powi(1 - prec as i32);
    let k = cutoff(a_f);
    let pi = Float::with_val(prec, Constant::Pi);
    let a = Float::with_val(prec, t) / Float::with_val(prec, &pi * 2u32);

    let mut head = Float::new(prec);
    for j in 1..=k {
        let x = Float::with_val(prec, &a / j);
        head += x.sin() / j;
    }
    let head_err = u * (a_f.abs() * 1.7 + 6.0 * ((k as f64).ln() + 1.0));

    // Σ_{k>K} sin(a/k)/k = Σ_i (-1)^i a^{2i+1}/(2i+1)! ζ(2i+2, K+1)
    let zetas = zeta_table(prec, k);
    let a2 = Float::with_val(prec, a.square_ref());
    let mut c = a.clone();
    let kf = k as f64;
    let ln_a = a_f.abs().max(1e-300).ln();
    let majorant = |i: usize| {
        let e = 2.0 * i as f64 + 1.0;
        (e * ln_a - ln_factorial(2 * i as u64 + 1)).exp() * zeta_tail_majorant(e + 1.0, kf)
    };
    let (tail, tail_err) = zeta_series(
        &zetas,
        0,
        |i| {
            if i > 0 {
                c *= &a2;
                c /= -((2 * i) as f64 * (2 * i + 1) as f64);
            }
            c.clone()
        },
        majorant,
        u * 1e-3,
    );

    let mut v = Float::with_val(prec, &head + &tail);
    v /= &pi;
    v += 0.5;
    let e = sum_bounds(&[(head_err + tail_err) / PI, 4.0 * u * (abs_up(&v) + 1.0)]);
    HPReal::new(v, e).with_prec(ctx.bits())
}

/// `s'(t) = (1/(2π²)) Σ_k cos(t/(2kπ))/k²`.
pub fn s_kernel_prime(t: &Float, ctx: &PrecisionContext) -> HPReal {
    let tf = t.to_f64();
    let a_f = tf / (2.0 * PI);
    let prec = working_prec(ctx, a_f);
    let u = 2f64.powi(1 - prec as i32);
    let k = cutoff(a_f);
    let pi = Float::with_val(prec, Constant::Pi);
    let a = Float::with_val(prec, t) / Float::with_val(prec, &pi * 2u32);

    let mut head = Float::new(prec);
    for j in 1..=k {
        let x = Float::with_val(prec, &a / j);
        head += x.cos() / (j * j);
    }
    let head_err = u * (a_f.abs() * 1.3 + 8.0);

    let zetas = zeta_table(prec, k);
    let a2 = Float::with_val(prec, a.square_ref());
    let mut c = Float::with_val(prec, 1);
    let kf = k as f64;
    let ln_a = a_f.abs().max(1e-300).ln();
    let majorant = |i: usize| {
        let e = 2.0 * i as f64;
        (e * ln_a - ln_factorial(2 * i as u64)).exp() * zeta_tail_majorant(e + 2.0, kf)
    };
    let (tail, tail_err) = zeta_series(
        &zetas,
        0,
        |i| {
            if i > 0 {
                c *= &a2;
                c /= -((2 * i - 1) as f64 * (2 * i) as f64);
            }
            c.clone()
        },
        majorant,
        u * 1e-3,
    );

    let scale = Float::with_val(prec, pi.square_ref()) * 2u32;
    let v = Float::with_val(prec, &head + &tail) / &scale;
    let e = sum_bounds(&[(head_err + tail_err) / (2.0 * PI * PI), 4.0 * u * abs_up(&v)]);
    HPReal::new(v, e).with_prec(ctx.bits())
}

/// `Σ_{k≥1} sin²(b/k)`.
pub fn sin2_sum(b: &Float, ctx: &PrecisionContext) -> HPReal {
    let bf = b.to_f64();
    let prec = working_prec(ctx, 2.0 * bf);
    let u = 2f64.powi(1 - prec as i32);
    let k = cutoff(2.0 * bf);
    let b = Float::with_val(prec, b);

    let mut head = Float::new(prec);
    for j in 1..=k {
        let x = Float::with_val(prec, &b / j);
        head += x.sin().square();
    }
    let head_err = u * (4.0 * bf.abs() + 4.0 * k as f64);

    // sin²y = Σ_{i≥1} (-1)^{i+1} (2y)^{2i} / (2 (2i)!)
    let zetas = zeta_table(prec, k);
    let w = Float::with_val(prec, &b * 2u32);
    let w2 = Float::with_val(prec, w.square_ref());
    let mut c = Float::with_val(prec, &w2 / 4u32);
    let kf = k as f64;
    let ln_w = (2.0 * bf.abs()).max(1e-300).ln();
    // Index i of the table holds ζ(2(i+1), K+1), i.e. power 2(i+1).
    let majorant = |i: usize| {
        let e = 2.0 * (i as f64 + 1.0);
        (e * ln_w - ln_factorial(2 * i as u64 + 2)).exp() / 2.0 * zeta_tail_majorant(e, kf)
    };
    let (tail, tail_err) = zeta_series(
        &zetas,
        0,
        |i| {
            if i > 0 {
                c *= &w2;
                c /= -((2 * i + 1) as f64 * (2 * i + 2) as f64);
            }
            c.clone()
        },
        majorant,
        u * 1e-3 * (abs_up(&head) + 1.0),
    );
    let v = Float::with_val(prec, &head + &tail);
    let e = sum_bounds(&[head_err + tail_err, 4.0 * u * abs_up(&v)]);
    HPReal::new(v, e).with_prec(ctx.bits())
}

/// Double-precision `s(t)` with a crude error bound, for long scans.
pub fn s_kernel_f64(t: f64) -> (f64, f64) {
    let a = t / (2.0 * PI);
    let k = cutoff(a);
    let mut head = 0.0;
    let mut comp = 0.0;
    for j in (1..=k).rev() {
        let y = (a / j as f64).sin() / j as f64 - comp;
        let s = head + y;
        comp = (s - head) - y;
        head = s;
    }
    let kf = k as f64;
    let mut tail = 0.0;
    let mut c = a;
    let a2 = a * a;
    for i in 0..40 {
        if i > 0 {
            c *= -a2 / ((2 * i) as f64 * (2 * i + 1) as f64);
        }
        let s = 2.0 * i as f64 + 2.0;
        let z = zeta_f64(s, kf + 1.0);
        let term = c * z;
        tail += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    let v = 0.5 + (head + tail) / PI;
    let err = 1e-14 * (1.0 + a.abs()) + 4.0 * f64::EPSILON * kf.ln().max(1.0);
    (v, err)
}

/// `ζ(s, q)`: sixteen direct terms, then Euler–Maclaurin with three
/// corrections.
fn zeta_f64(s: f64, q: f64) -> f64 {
    let mut direct = 0.0;
    for k in 0..16 {
        direct += (q + k as f64).powf(-s);
    }
    let q = q + 16.0;
    let p = q.powf(-s);
    direct + p * q / (s - 1.0) + 0.5 * p + s / 12.0 * p / q - s * (s + 1.0) * (s + 2.0) / 720.0 * p / q.powi(3)
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * p / q.powi(5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn values_at_origin() {
        let c = ctx();
        let z = c.float(0);
        assert!(s_kernel(&z, &c).agrees_with(&HPReal::exact(c.float(0.5)), 1e-45));
        let twelfth = c.float(12).recip();
        assert!(s_kernel_prime(&z, &c).agrees_with(&HPReal::exact(twelfth), 1e-45));
    }

    #[test]
    fn cutoff_independent() {
        // Direct summation with a much larger K must agree.
        let c = PrecisionContext::new(30).unwrap();
        let t = 37.5f64;
        let v = s_kernel(&c.float(t), &c);
        let a = t / (2.0 * PI);
        let prec = 192;
        let af = Float::with_val(prec, a);
        let mut head = Float::new(prec);
        let kk = 4096u64;
        for j in 1..=kk {
            head += Float::with_val(prec, &af / j).sin() / j;
        }
        // Tail Σ_{k>KK} sin(a/k)/k ≈ a/KK, good to a³/KK³.
        let direct = 0.5 + (head.to_f64() + a / kk as f64) / PI;
        assert!((v.to_f64() - direct).abs() < 1e-6, "{} vs {direct}", v.to_f64());
        let (fv, fe) = s_kernel_f64(t);
        assert!((fv - v.to_f64()).abs() <= fe + 1e-15, "{fv} {fe} {}", v.to_f64());
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let c = PrecisionContext::new(40).unwrap();
        let t = c.float(123.25);
        let h = c.float(1e-12);
        let plus = s_kernel(&Float::with_val(c.bits(), &t + &h), &c);
        let minus = s_kernel(&Float::with_val(c.bits(), &t - &h), &c);
        let dq = (&plus - &minus).to_f64() / 2e-12;
        let d = s_kernel_prime(&t, &c).to_f64();
        assert!((dq - d).abs() < 1e-10, "{dq} vs {d}");
    }

    #[test]
    fn sin2_small_argument() {
        // Σ sin²(b/k) ≈ b² ζ(2) for tiny b.
        let c = ctx();
        let b = 1e-5;
        let v = sin2_sum(&c.float(b), &c).to_f64();
        let z2 = PI * PI / 6.0;
        assert!((v / (b * b) - z2).abs() < 1e-8);
    }
}
