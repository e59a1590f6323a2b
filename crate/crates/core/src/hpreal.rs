//! Arbitrary-precision reals carrying an absolute error bound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::Float;

/// Upper bound on `|x|` as an `f64`.
pub(crate) fn abs_up(x: &Float) -> f64 {
    x.to_f64_round(Round::Up).abs().max(x.to_f64_round(Round::Down).abs())
}

/// Bound on the rounding error of a freshly rounded value.
pub(crate) fn rounding(x: &Float) -> f64 {
    abs_up(x) * 2f64.powi(1 - x.prec() as i32)
}

/// Decimal rendering with `digits` significant digits: positional for
/// moderate exponents, `d.ddde±x` otherwise.
pub fn format_float(x: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (neg, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    let exp = exp.unwrap_or(0);
    let sign = if neg { "-" } else { "" };
    let m = mantissa.as_str();
    if (-5..=21).contains(&exp) {
        let body = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), m)
        } else if exp as usize >= m.len() {
            format!("{}{}", m, "0".repeat(exp as usize - m.len()))
        } else {
            format!("{}.{}", &m[..exp as usize], &m[exp as usize..])
        };
        format!("{sign}{body}")
    } else {
        let rest = if m.len() > 1 { format!(".{}", &m[1..]) } else { String::new() };
        format!("{sign}{}{rest}e{}", &m[..1], exp - 1)
    }
}

/// Sum of nonnegative bounds, inflated to absorb the `f64` rounding of the sum
/// itself.
pub(crate) fn sum_bounds(parts: &[f64]) -> f64 {
    let s: f64 = parts.iter().sum();
    s * (1.0 + 4.0 * f64::EPSILON)
}

/// A value together with an absolute error bound.
///
/// Arithmetic propagates first-order error bounds and adds the rounding error
/// of the operation, so a bound never shrinks below what was propagated.
#[derive(Debug, Clone, PartialEq)]
pub struct HPReal {
    value: Float,
    err: f64,
}

impl HPReal {
    pub fn new(value: Float, err_bound: f64) -> Self {
        assert!(
            err_bound.is_finite() && err_bound >= 0.0,
            "error bound must be finite and nonnegative, got {err_bound}"
        );
        Self {
            value,
            err: err_bound,
        }
    }

    pub fn exact(value: Float) -> Self {
        Self { value, err: 0.0 }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn err_bound(&self) -> f64 {
        self.err
    }

    pub fn into_parts(self) -> (Float, f64) {
        (self.value, self.err)
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Widens the bound by `extra`.
    pub fn widen(mut self, extra: f64) -> Self {
        self.err = sum_bounds(&[self.err, extra]);
        assert!(self.err.is_finite());
        self
    }

    /// Rounds to `prec` bits, accounting for the rounding.
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.value.prec() {
            return Self::new(Float::with_val(prec, &self.value), self.err);
        }
        let v = Float::with_val(prec, &self.value);
        let e = sum_bounds(&[self.err, rounding(&v)]);
        Self::new(v, e)
    }

    /// `value - err > 0`.
    pub fn certainly_positive(&self) -> bool {
        self.value.is_sign_positive() && !self.value.is_zero() && self.value > self.err
    }

    /// `value + err < 0`.
    pub fn certainly_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero() && -self.value.clone() > self.err
    }

    /// Certified sign, or `None` when zero lies inside the error bar.
    pub fn certified_sign(&self) -> Option<Ordering> {
        if self.certainly_positive() {
            Some(Ordering::Greater)
        } else if self.certainly_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// `|self - other|` rounded up to `f64`.
    pub fn abs_diff(&self, other: &HPReal) -> f64 {
        let prec = self.prec().max(other.prec());
        let d = Float::with_val(prec, &self.value - &other.value);
        abs_up(&d)
    }

    /// `|self - other| <= tol`.
    pub fn agrees_with(&self, other: &HPReal, tol: f64) -> bool {
        self.abs_diff(other) <= tol
    }

    /// `|self - other|` lies within the two error bars.
    pub fn consistent_with(&self, other: &HPReal) -> bool {
        self.abs_diff(other) <= sum_bounds(&[self.err, other.err])
    }

    pub fn abs(&self) -> Self {
        Self::new(self.value.clone().abs(), self.err)
    }

    pub fn scale(&self, factor: &Float) -> Self {
        let prec = self.prec().max(factor.prec());
        let v = Float::with_val(prec, &self.value * factor);
        let e = sum_bounds(&[self.err * abs_up(factor), rounding(&v)]);
        Self::new(v, e)
    }

    pub fn add_exact(&self, term: &Float) -> Self {
        let prec = self.prec().max(term.prec());
        let v = Float::with_val(prec, &self.value + term);
        let e = sum_bounds(&[self.err, rounding(&v)]);
        Self::new(v, e)
    }

    /// Formats the value with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        format_float(&self.value, digits)
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} ± {:.3e}", self.to_string_digits(digits), self.err)
    }
}

impl Add for &HPReal {
    type Output = HPReal;
    fn add(self, rhs: &HPReal) -> HPReal {
        let prec = self.prec().max(rhs.prec());
        let v = Float::with_val(prec, &self.value + &rhs.value);
        let e = sum_bounds(&[self.err, rhs.err, rounding(&v)]);
        HPReal::new(v, e)
    }
}

impl Sub for &HPReal {
    type Output = HPReal;
    fn sub(self, rhs: &HPReal) -> HPReal {
        let prec = self.prec().max(rhs.prec());
        let v = Float::with_val(prec, &self.value - &rhs.value);
        let e = sum_bounds(&[self.err, rhs.err, rounding(&v)]);
        HPReal::new(v, e)
    }
}

impl Mul for &HPReal {
    type Output = HPReal;
    fn mul(self, rhs: &HPReal) -> HPReal {
        let prec = self.prec().max(rhs.prec());
        let v = Float::with_val(prec, &self.value * &rhs.value);
        let e = sum_bounds(&[
            abs_up(&self.value) * rhs.err,
            abs_up(&rhs.value) * self.err,
            self.err * rhs.err,
            rounding(&v),
        ]);
        HPReal::new(v, e)
    }
}

impl Div for &HPReal {
    type Output = HPReal;
    /// Panics if the divisor's error bar contains zero.
    fn div(self, rhs: &HPReal) -> HPReal {
        let denom = abs_up(&rhs.value);
        let floor = denom - rhs.err;
        assert!(floor > 0.0, "divisor error bar contains zero");
        let prec = self.prec().max(rhs.prec());
        let v = Float::with_val(prec, &self.value / &rhs.value);
        let q = abs_up(&v);
        let e = sum_bounds(&[(self.err + q * rhs.err) / floor, rounding(&v)]);
        HPReal::new(v, e)
    }
}

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal::new(-self.value, self.err)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &HPReal) -> HPReal {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(v: f64, e: f64) -> HPReal {
        HPReal::new(Float::with_val(128, v), e)
    }

    #[test]
    fn sign_certification_respects_error_bar() {
        assert!(hp(1e-10, 1e-11).certainly_positive());
        assert!(!hp(1e-10, 1e-9).certainly_positive());
        assert!(hp(-1e-10, 1e-11).certainly_negative());
        assert_eq!(hp(0.0, 0.0).certified_sign(), None);
    }

    #[test]
    fn arithmetic_propagates_bounds() {
        let a = hp(2.0, 1e-20);
        let b = hp(3.0, 2e-20);
        let s = &a + &b;
        assert!(s.err_bound() >= 3e-20);
        let p = &a * &b;
        assert!(p.err_bound() >= 2.0 * 2e-20 + 3.0 * 1e-20);
        let q = &a / &b;
        assert!(q.err_bound() > 0.0);
        assert!((q.to_f64() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn formats_positional_and_scientific() {
        let f = |v: f64| Float::with_val(64, v);
        assert_eq!(format_float(&f(12.5), 4), "12.50");
        assert_eq!(format_float(&f(-0.0025), 2), "-0.0025");
        assert_eq!(format_float(&f(1.5e-30), 2), "1.5e-30");
        assert_eq!(format_float(&f(0.0), 5), "0");
        assert_eq!(format_float(&f(300.0), 2), "300");
    }

    #[test]
    #[should_panic]
    fn rejects_negative_bounds() {
        let _ = hp(1.0, -1.0);
    }
}
