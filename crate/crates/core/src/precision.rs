//! Working precision and tolerance policy threaded through every numeric call.

use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Environment variable that overrides the default number of working digits.
pub const DIGITS_ENV: &str = "CMDEG_DIGITS";

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Extra binary digits carried beyond the requested decimal digits.
pub const GUARD_BITS: u32 = 24;

/// Decimal working digits plus the truncation tolerances for series and
/// quadrature.
///
/// Error bounds are carried as `f64`, so the digit count is capped well
/// inside the `f64` exponent range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    working_digits: u32,
    series_tol: f64,
    quad_tol: f64,
}

impl PrecisionContext {
    pub const DEFAULT_DIGITS: u32 = 50;
    pub const MIN_DIGITS: u32 = 20;
    pub const MAX_DIGITS: u32 = 280;

    /// Context with the default tolerances for `digits`: series truncated at
    /// `10^-(digits-5)`, quadrature at `10^-(digits-10)`.
    pub fn new(digits: u32) -> Result<Self> {
        Self::check_digits(digits)?;
        let series_tol = 10f64.powi(-(digits as i32 - 5));
        let quad_tol = 10f64.powi(-(digits as i32 - 10));
        Self::with_tolerances(digits, series_tol, quad_tol)
    }

    pub fn with_tolerances(digits: u32, series_tol: f64, quad_tol: f64) -> Result<Self> {
        Self::check_digits(digits)?;
        let ceiling = 10f64.powi(-(digits as i32 - 10)) * (1.0 + 1e-12);
        for (name, tol) in [("series", series_tol), ("quadrature", quad_tol)] {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Precision(format!("{name} tolerance must be positive")));
            }
            if tol > ceiling {
                return Err(Error::Precision(format!(
                    "{name} tolerance {tol:e} is looser than 1e-{} for {digits} digits",
                    digits - 10
                )));
            }
        }
        Ok(Self {
            working_digits: digits,
            series_tol,
            quad_tol,
        })
    }

    /// Default context, honouring `CMDEG_DIGITS` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(DIGITS_ENV) {
            Ok(raw) => {
                let digits = raw.trim().parse::<u32>().map_err(|_| {
                    Error::Precision(format!("{DIGITS_ENV}={raw:?} is not a digit count"))
                })?;
                Self::new(digits)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    fn check_digits(digits: u32) -> Result<()> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&digits) {
            return Err(Error::Precision(format!(
                "working digits must lie in [{}, {}], got {digits}",
                Self::MIN_DIGITS,
                Self::MAX_DIGITS
            )));
        }
        Ok(())
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn series_tol(&self) -> f64 {
        self.series_tol
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// Binary precision used for `Float` values.
    pub fn bits(&self) -> u32 {
        (self.working_digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Unit roundoff at the working precision.
    pub fn unit_roundoff(&self) -> f64 {
        2f64.powi(1 - self.bits() as i32)
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    /// Parses a decimal literal or a ratio `p/q` at working precision.
    pub fn parse_real(&self, text: &str) -> Result<Float> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num = self.parse_real(num)?;
            let den = self.parse_real(den)?;
            if den.is_zero() {
                return Err(crate::error::domain("zero denominator"));
            }
            return Ok(num / den);
        }
        let parsed = Float::parse(text)
            .map_err(|e| crate::error::domain(format!("cannot parse {text:?} as a real: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(Self::DEFAULT_DIGITS).expect("default digits are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerances_respect_invariant() {
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.working_digits(), 50);
        assert!(ctx.series_tol() <= 1e-40);
        assert!(ctx.quad_tol() <= 1e-40 * (1.0 + 1e-12));
        assert!(ctx.bits() >= 166);
    }

    #[test]
    fn rejects_small_digit_counts_and_loose_tolerances() {
        assert!(PrecisionContext::new(19).is_err());
        assert!(PrecisionContext::new(20).is_ok());
        assert!(PrecisionContext::with_tolerances(30, 1e-10, 1e-25).is_err());
        assert!(PrecisionContext::with_tolerances(30, 1e-25, 0.0).is_err());
    }

    #[test]
    fn parses_ratios() {
        let ctx = PrecisionContext::default();
        let x = ctx.parse_real("7/3").unwrap();
        let expect = ctx.float(7) / 3u32;
        assert_eq!(x, expect);
        assert!(ctx.parse_real("abc").is_err());
    }
}
