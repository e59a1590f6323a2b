//! `d^j/dt^j [t^p g_n(t)]` for the Binet kernels
//! `g_n(t) = (-1)^(n+1) Σ_{i≥n+2} B_2i/(2i)! t^(2i-2)`, `n ≥ -1`.
//!
//! `g_{-1}(t) = coth(t/2)/(2t) - 1/t²` is the kernel of `R_0`, and every
//! kernel in the crate is a shape of this family: `f_n = t g_n`, the level-`j`
//! kernels of `(-1)^m R_n^(m)` are `d^j[t^m g_{n-1}]`, and the Laguerre kernel
//! is `f_m = (m-1)!/2 + d^(m-1)[t^m g_{-1}]`.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};

use rug::ops::Pow;
use rug::{Complete, Float, Integer};

use crate::error::{domain, unsupported, Result};
use crate::hpreal::{abs_up, sum_bounds, HPReal};
use crate::precision::PrecisionContext;
use crate::special::util::{falling, ln_falling};
use crate::special::with_scaled_even;

/// `|B_2i|/(2i)! = 2ζ(2i)/(2π)^2i ≤ 3.3/(2π)^2i`.
const COEF_MAJORANT: f64 = 3.3;
const MAX_SERIES_TERMS: i64 = 50_000;

pub(crate) fn round_prec(bits: u32) -> u32 {
    bits.div_ceil(64) * 64
}

/// Identifies `d^deriv/dt^deriv [t^power g_order(t)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinetShape {
    pub order: i32,
    pub power: u32,
    pub deriv: u32,
}

/// `|k(t)| ≤ coef (1+t)^power` for all `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    pub coef: f64,
    pub power: u32,
}

impl BinetShape {
    pub fn new(order: i32, power: u32, deriv: u32) -> Result<Self> {
        if order < -1 {
            return Err(domain(format!("kernel order must be >= -1, got {order}")));
        }
        Ok(Self { order, power, deriv })
    }

    /// Order of the zero of `t^p g_n` at the origin; derivatives up to this
    /// order integrate by parts against `e^{-xt}` without boundary terms.
    pub fn vanishing_order(&self) -> i64 {
        2 * self.order as i64 + 2 + self.power as i64
    }

    fn sign(&self) -> i32 {
        // (-1)^(n+1) in front of the series.
        if (self.order + 1) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn first_index(&self) -> i64 {
        let j = self.deriv as i64;
        let p = self.power as i64;
        let mut i = self.order as i64 + 2;
        while 2 * i - 2 + p < j {
            i += 1;
        }
        i
    }

    fn ln_majorant(&self, i: i64, ln_t: f64) -> f64 {
        let r = 2 * i - 2 + self.power as i64;
        let j = self.deriv;
        COEF_MAJORANT.ln() + ln_falling(r, j) + (r - j as i64) as f64 * ln_t - 2.0 * i as f64 * (2.0 * PI).ln()
    }

    /// Evaluates with the automatic representation: series below `t = 2`,
    /// closed form above.
    pub fn eval(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        check_t(t)?;
        if *t < 2 {
            self.series(t, ctx)
        } else {
            self.closed_form(t, ctx)
        }
    }

    /// Term-wise differentiated Bernoulli series, valid for `0 < t < 2π`.
    pub fn series(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        check_t(t)?;
        let tf = t.to_f64();
        if tf >= 2.0 * PI * (1.0 - 1e-6) {
            return Err(unsupported(format!("series representation needs t < 2π, got {tf}")));
        }
        let j = self.deriv;
        let p = self.power as i64;
        let ln_t = tf.ln();
        let i0 = self.first_index();
        let ln_first = self.ln_majorant(i0, ln_t);
        let ln_tol = ln_first - (ctx.bits() as f64 + 8.0) * LN_2;

        // Pick the last index from the majorant, whose ratios decrease in i.
        let mut max_ln = ln_first;
        let mut last = i0;
        let tail_ln = loop {
            let cur = self.ln_majorant(last, ln_t);
            let next = self.ln_majorant(last + 1, ln_t);
            max_ln = max_ln.max(cur);
            let ln_rho = next - cur;
            if ln_rho < 0.0 {
                let rho = ln_rho.exp();
                let bound = cur + (rho / (1.0 - rho)).ln();
                if bound < ln_tol {
                    break bound;
                }
            }
            last += 1;
            if last - i0 > MAX_SERIES_TERMS {
                return Err(unsupported(format!("series at t = {tf} needs too many terms")));
            }
        };
        let guard = ((max_ln - ln_first) / LN_2).ceil().max(0.0) as u32 + 16;
        let prec = round_prec(ctx.bits() + guard);
        let u = 2f64.powi(1 - prec as i32);

        let t = Float::with_val(prec, t);
        let t2 = Float::with_val(prec, t.square_ref());
        let r0 = 2 * i0 - 2 + p;
        let mut pw = Float::with_val(prec, (&t).pow((r0 - j as i64) as i32));
        let mut sum = Float::new(prec);
        let mut round = 0.0;
        with_scaled_even(prec, last as usize + 1, |c| {
            for i in i0..=last {
                let r = 2 * i - 2 + p;
                let term = Float::with_val(prec, &c[i as usize] * &pw) * falling(r, j, prec);
                round += abs_up(&term) * (j as f64 + 2.0 * (i - i0) as f64 + 8.0);
                sum += &term;
                pw *= &t2;
            }
        });
        if self.sign() < 0 {
            sum = -sum;
        }
        let err = sum_bounds(&[tail_ln.exp(), u * round, u * abs_up(&sum)]);
        Ok(HPReal::new(sum, err))
    }

    /// Closed form through `coth(t/2) = 1 + 2 Σ_k e^{-kt}`, valid for `t ≥ 1`.
    ///
    /// The pieces cancel to roughly `(t/2π)^(2n+4)` below `t = 2π`, so the
    /// working precision is raised accordingly.
    pub fn closed_form(&self, t: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
        check_t(t)?;
        let tf = t.to_f64();
        if tf < 1.0 {
            return Err(unsupported(format!("closed form is not used below t = 1, got {tf}")));
        }
        let n = self.order as i64;
        let p = self.power as i64;
        let j = self.deriv;
        let jf = j as f64;
        let cancel = ((2 * n + 4) as f64 * (2.0 * PI / tf).log2()).max(0.0);
        let fact_bits = crate::special::util::ln_factorial(j as u64 + 1) / LN_2;
        let guard = 24 + cancel.ceil() as u32 + fact_bits.ceil() as u32 + 2 * self.power;
        let prec = round_prec(ctx.bits() + guard);
        let u = 2f64.powi(1 - prec as i32);
        let t = Float::with_val(prec, t);

        let mono = |q: i64| -> Float {
            let f = falling(q, j, prec);
            if f.is_zero() {
                f
            } else {
                f * Float::with_val(prec, (&t).pow((q - j as i64) as i32))
            }
        };

        let mut total = Float::new(prec);
        let mut round = 0.0;
        let a = mono(p - 2);
        let b = -mono(p - 1) / 2u32;
        round += (abs_up(&a) + abs_up(&b)) * (jf + 6.0);
        total += &a;
        total += &b;
        if n >= 0 {
            with_scaled_even(prec, n as usize + 2, |c| {
                for i in 1..=(n + 1) {
                    let term = mono(2 * i - 2 + p) * &c[i as usize];
                    round += abs_up(&term) * (jf + 8.0);
                    total += &term;
                }
            });
        }
        let mut scale = abs_up(&total).max(abs_up(&a)).max(abs_up(&b));

        // Exponential part: -Σ_k e^{-kt} Q(-k), Q(κ) = Σ_l a_l κ^(j-l).
        let coeffs: Vec<Float> = (0..=j)
            .map(|l| {
                let binom = Integer::binomial_u(j, l).complete();
                let f = falling(p - 1, l, prec);
                if f.is_zero() {
                    f
                } else {
                    f * binom * Float::with_val(prec, (&t).pow((p - 1 - l as i64) as i32))
                }
            })
            .collect();
        let ln_abs: Vec<f64> = coeffs.iter().map(|c| abs_up(c).ln()).collect();
        let ln_pabs = |k: f64| -> f64 {
            let terms: Vec<f64> = ln_abs
                .iter()
                .enumerate()
                .map(|(l, la)| la + (j as f64 - l as f64) * k.ln())
                .collect();
            log_sum_exp(&terms)
        };
        let decay = Float::with_val(prec, (-t.clone()).exp());
        let mut ek = decay.clone();
        let mut exp_part = Float::new(prec);
        let mut tail = 0.0;
        for k in 1u64.. {
            let kappa = -(k as f64);
            let mut q = coeffs[0].clone();
            for c in &coeffs[1..] {
                q *= kappa;
                q += c;
            }
            let term = q * &ek;
            round += abs_up(&term) * (k as f64 + 2.0 * jf + 8.0);
            if k == 1 {
                scale = scale.max(abs_up(&term));
            }
            exp_part += &term;
            let kn = (k + 1) as f64;
            let ln_rho = jf * ((kn + 1.0) / kn).ln() - tf;
            if ln_rho < 0.0 {
                let rho = ln_rho.exp();
                let ln_bound = ln_pabs(kn) - kn * tf - (1.0 - rho).ln();
                let ln_tol = scale.max(f64::MIN_POSITIVE).ln() - (prec as f64 - 8.0) * LN_2;
                if ln_bound < ln_tol || ln_bound < -700.0 {
                    tail = ln_bound.exp();
                    break;
                }
            }
            if k > 100_000 {
                return Err(unsupported(format!("closed form at t = {tf} did not converge")));
            }
            ek *= &decay;
        }
        total -= exp_part;
        if n % 2 != 0 {
            total = -total;
        }
        let err = sum_bounds(&[tail, u * round, u * abs_up(&total)]);
        Ok(HPReal::new(total, err))
    }

    /// Global bound `|k(t)| ≤ A (1+t)^P`: the series majorant on `(0, 1]`
    /// and term-wise bounds of the closed form on `[1, ∞)`.
    pub fn growth_bound(&self) -> GrowthBound {
        let j = self.deriv;
        let p = self.power as i64;
        let n = self.order as i64;

        let i0 = self.first_index();
        let mut small = 0.0;
        let mut i = i0;
        loop {
            let m = self.ln_majorant(i, 0.0).exp();
            small += m;
            let ratio = (self.ln_majorant(i + 1, 0.0) - self.ln_majorant(i, 0.0)).exp();
            if ratio < 0.5 && m < 1e-30 * small.max(1e-300) {
                small += m;
                break;
            }
            i += 1;
        }

        let mut monos: Vec<(i64, f64)> = vec![
            (p - 2 - j as i64, ln_falling(p - 2, j).exp()),
            (p - 1 - j as i64, 0.5 * ln_falling(p - 1, j).exp()),
        ];
        for i in 1..=(n + 1).max(0) {
            let q = 2 * i - 2 + p;
            let c = COEF_MAJORANT / (2.0 * PI).powi(2 * i as i32);
            monos.push((q - j as i64, c * ln_falling(q, j).exp()));
        }
        for l in 0..=j {
            let binom = crate::special::util::ln_factorial(j as u64)
                - crate::special::util::ln_factorial(l as u64)
                - crate::special::util::ln_factorial((j - l) as u64);
            let c = (binom + ln_falling(p - 1, l)).exp();
            let q = (j - l) as i32;
            let moment: f64 = (1..2000).map(|k| (k as f64).powi(q) * (-(k as f64)).exp()).sum();
            monos.push((p - 1 - l as i64, c * moment * 1.01));
        }
        let power = monos
            .iter()
            .filter(|(_, c)| *c > 0.0)
            .map(|(e, _)| (*e).max(0) as u32)
            .max()
            .unwrap_or(0);
        let large: f64 = monos.iter().map(|(_, c)| c).sum();
        GrowthBound {
            coef: small.max(large) * 1.01,
            power,
        }
    }

    /// Certified sign of the kernel on `[t0, ∞)` from the dominant term of the
    /// closed form, or `None` when the dominance test fails at `t0`.
    pub fn sign_beyond(&self, t0: f64) -> Option<Ordering> {
        let j = self.deriv;
        let p = self.power as i64;
        let n = self.order as i64;
        let outer = if n % 2 == 0 { 1.0 } else { -1.0 };

        let mut monos: Vec<(i64, f64)> = vec![
            (p - 2 - j as i64, signed_falling(p - 2, j)),
            (p - 1 - j as i64, -0.5 * signed_falling(p - 1, j)),
        ];
        for i in 1..=(n + 1).max(0) {
            let q = 2 * i - 2 + p;
            let c = crate::special::bernoulli_over_factorial(2 * i as usize, 64).to_f64();
            monos.push((q - j as i64, c * signed_falling(q, j)));
        }
        monos.retain(|(_, c)| *c != 0.0);
        // |a_l| t^(p-1-l), the exponential coefficients.
        let exp_coefs: Vec<(i64, u32, f64)> = (0..=j)
            .map(|l| {
                let binom = Integer::binomial_u(j, l).complete().to_f64();
                (p - 1 - l as i64, j - l, (binom * signed_falling(p - 1, l)).abs())
            })
            .filter(|(_, _, c)| *c > 0.0)
            .collect();
        let max_q = exp_coefs.iter().map(|(e, _, _)| *e).max().unwrap_or(0);
        if (max_q as f64) >= t0 {
            return None;
        }
        // Σ_k e^{-kt} Σ_l |a_l| k^(j-l) t^e, scaled by t^-E e^{ct}, is nonincreasing for t ≥ t0.
        let exp_bound = |shift_e: i64, skip_first: bool, c_rate: f64| -> f64 {
            let mut s = 0.0;
            for k in 1..400u32 {
                if skip_first && k == 1 {
                    continue;
                }
                for &(e, pw, c) in &exp_coefs {
                    let ln = c.ln() + pw as f64 * (k as f64).ln() + (e - shift_e) as f64 * t0.ln()
                        - (k as f64 - c_rate) * t0;
                    s += ln.exp();
                }
            }
            s
        };

        if let Some(big_e) = monos.iter().map(|m| m.0).max() {
            let mut others = 0.0;
            for &(e, c) in &monos {
                if e != big_e {
                    others += c.abs() * t0.powi((e - big_e) as i32);
                }
            }
            let combined: f64 = monos.iter().filter(|(e, _)| *e == big_e).map(|(_, c)| c).sum();
            if combined == 0.0 {
                return None;
            }
            if (max_q - big_e) as f64 >= t0 {
                return None;
            }
            let rest = others + exp_bound(big_e, false, 0.0);
            if rest < 0.5 * combined.abs() {
                return Some(sign_of(outer * combined));
            }
            return None;
        }
        // Purely exponential: -outer Σ_k e^{-kt} Q_k(t), led by (-1)^j t^(p-1) e^{-t}.
        let lead = (0..=j)
            .map(|l| (l, signed_falling(p - 1, l)))
            .find(|(_, f)| *f != 0.0)?;
        let (l0, f0) = lead;
        let lead_e = p - 1 - l0 as i64;
        let lead_c = Integer::binomial_u(j, l0).complete().to_f64() * f0 * if (j - l0).is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut rest = 0.0;
        for &(e, _, c) in &exp_coefs {
            if e < lead_e {
                rest += c * t0.powi((e - lead_e) as i32);
            }
        }
        rest += exp_bound(lead_e, true, 1.0);
        if rest < 0.5 * lead_c.abs() {
            Some(sign_of(-outer * lead_c))
        } else {
            None
        }
    }
}

fn signed_falling(r: i64, j: u32) -> f64 {
    let mut acc = 1.0;
    for q in 0..j as i64 {
        acc *= (r - q) as f64;
    }
    acc
}

fn sign_of(v: f64) -> Ordering {
    if v > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub(crate) fn check_t(t: &Float) -> Result<()> {
    if !t.is_finite() || *t <= 0 {
        return Err(domain(format!("kernel argument must be positive, got {}", t.to_f64())));
    }
    Ok(())
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
    fn series_and_closed_form_agree_between_one_and_six() {
        let c = ctx();
        for shape in [
            BinetShape::new(0, 0, 0).unwrap(),
            BinetShape::new(1, 1, 0).unwrap(),
            BinetShape::new(2, 0, 4).unwrap(),
            BinetShape::new(-1, 4, 3).unwrap(),
            BinetShape::new(-1, 5, 5).unwrap(),
            BinetShape::new(1, 0, 3).unwrap(),
        ] {
            for &t in &[1.0, 1.7, 3.0, 5.5] {
                let s = shape.series(&f(t), &c).unwrap();
                let cf = shape.closed_form(&f(t), &c).unwrap();
                let scale = abs_up(s.value()).max(1e-30);
                assert!(s.consistent_with(&cf), "{shape:?} t={t}: {s} vs {cf}");
                assert!(s.abs_diff(&cf) <= 1e-40 * scale.max(1.0), "{shape:?} t={t}");
            }
        }
    }

    #[test]
    fn g0_closed_form_by_hand() {
        // g_0(t) = 1/t² - coth(t/2)/(2t) + 1/12
        let c = ctx();
        let t = f(3.0);
        let coth = Float::with_val(256, t.clone() / 2u32).tanh().recip();
        let expect = Float::with_val(256, t.clone().square().recip()) - coth / (t.clone() * 2u32)
            + Float::with_val(256, 12).recip();
        let v = BinetShape::new(0, 0, 0).unwrap().eval(&t, &c).unwrap();
        assert!(v.agrees_with(&HPReal::exact(expect), 1e-45));
    }

    #[test]
    fn growth_bound_dominates_samples() {
        let c = ctx();
        for shape in [
            BinetShape::new(0, 0, 0).unwrap(),
            BinetShape::new(2, 3, 1).unwrap(),
            BinetShape::new(-1, 3, 2).unwrap(),
            BinetShape::new(1, 0, 3).unwrap(),
        ] {
            let g = shape.growth_bound();
            for &t in &[1e-3, 0.5, 1.0, 2.0, 7.0, 30.0, 120.0] {
                let v = shape.eval(&f(t), &c).unwrap().to_f64().abs();
                assert!(v <= g.coef * (1.0 + t).powi(g.power as i32), "{shape:?} t={t}");
            }
        }
    }

    #[test]
    fn tail_signs() {
        // g_n^(2n) grows like a positive polynomial; g_1''' decays negatively.
        assert_eq!(BinetShape::new(1, 0, 2).unwrap().sign_beyond(60.0), Some(Ordering::Greater));
        assert_eq!(BinetShape::new(1, 0, 3).unwrap().sign_beyond(60.0), Some(Ordering::Less));
        let shape = BinetShape::new(-1, 3, 3).unwrap();
        let s = shape.sign_beyond(60.0).unwrap();
        let v = shape.eval(&f(60.0), &ctx()).unwrap();
        assert_eq!(v.certified_sign(), Some(s));
    }
}
