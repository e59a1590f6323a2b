//! Small helpers shared by the series evaluators.

use rug::float::Constant;
use rug::{Complete, Float};

/// `ln n!`, exact summation for small `n` and Stirling with a bound-safe
/// correction otherwise (upper-biased by at most 1e-12 relative).
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 256 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    (x + 0.5) * x.ln() - x + 0.5 * ln_2pi + 1.0 / (12.0 * x) + 1e-12 * x
}

/// `ln |r (r-1) ... (r-j+1)|` for `r >= j` as reals, `-inf` when the product
/// vanishes.
pub fn ln_falling(r: i64, j: u32) -> f64 {
    let mut s = 0.0;
    for q in 0..j as i64 {
        let v = r - q;
        if v == 0 {
            return f64::NEG_INFINITY;
        }
        s += (v.unsigned_abs() as f64).ln();
    }
    s
}

/// Falling factorial `r (r-1) ... (r-j+1)` as a `Float` (exact while it fits
/// in `prec` bits).
pub fn falling(r: i64, j: u32, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 1);
    for q in 0..j as i64 {
        acc *= r - q;
    }
    acc
}

pub fn factorial_float(n: u32, prec: u32) -> Float {
    Float::with_val(prec, rug::Integer::factorial(n).complete())
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_matches_summation_at_the_switch() {
        let exact: f64 = (2..=300u64).map(|k| (k as f64).ln()).sum();
        let approx = ln_factorial(300);
        assert!(approx >= exact - 1e-9);
        assert!((approx - exact).abs() < 1e-8);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 3, 64), 60);
        assert_eq!(falling(-1, 3, 64), -6);
        assert_eq!(falling(2, 3, 64), 0);
        assert_eq!(ln_falling(2, 3), f64::NEG_INFINITY);
        assert!((ln_falling(5, 3) - 60f64.ln()).abs() < 1e-12);
    }
}
