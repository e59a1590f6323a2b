//! Sign scans of kernels over a grid of `t` values.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::Float;

use crate::error::{domain, Result};
use crate::hpreal::HPReal;
use crate::kernels::BinetShape;
use crate::precision::PrecisionContext;

pub const DEFAULT_GRID_POINTS: usize = 2000;
pub const DEFAULT_T_MIN: f64 = 1e-4;
pub const DEFAULT_T_MAX: f64 = 60.0;

/// `points` log-spaced values on `[lo, hi]`, both ends included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2, "bad grid [{lo}, {hi}] x {points}");
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    (0..points)
        .map(|i| match i {
            0 => lo,
            i if i + 1 == points => hi,
            i => (a + step * i as f64).exp(),
        })
        .collect()
}

/// The default scan grid: 2000 log-spaced points on `[1e-4, 60]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_GRID_POINTS)
}

/// Result of scanning one kernel.
#[derive(Debug, Clone)]
pub struct SignScan {
    pub samples: Vec<(f64, HPReal)>,
    /// Sample with the smallest value.
    pub min_at: f64,
    pub min_value: HPReal,
    /// First sample that is certainly negative.
    pub witness: Option<(f64, HPReal)>,
    /// Samples whose sign is not certified.
    pub unresolved: usize,
    /// Certified sign beyond the last grid point, when known.
    pub tail: Option<Ordering>,
}

impl SignScan {
    /// Every sample is certainly positive and so is the tail.
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.unresolved == 0 && self.tail == Some(Ordering::Greater)
    }

    pub fn t_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }
}

/// Evaluates `f` on `grid` in parallel and reduces in grid order.
pub fn scan_fn<F>(grid: &[f64], tail: Option<Ordering>, ctx: &PrecisionContext, f: F) -> Result<SignScan>
where
    F: Fn(&Float) -> Result<HPReal> + Sync,
{
    if grid.is_empty() {
        return Err(domain("empty scan grid"));
    }
    let samples = grid
        .par_iter()
        .map(|&t| f(&ctx.float(t)).map(|v| (t, v)))
        .collect::<Result<Vec<_>>>()?;
    let mut min_i = 0;
    let mut witness = None;
    let mut unresolved = 0;
    for (i, (t, v)) in samples.iter().enumerate() {
        if v.value() < samples[min_i].1.value() {
            min_i = i;
        }
        match v.certified_sign() {
            Some(Ordering::Less) if witness.is_none() => witness = Some((*t, v.clone())),
            None => unresolved += 1,
            _ => {}
        }
    }
    let (min_at, min_value) = samples[min_i].clone();
    Ok(SignScan {
        samples,
        min_at,
        min_value,
        witness,
        unresolved,
        tail,
    })
}

/// Scans `d^j/dt^j [t^p g_n]`, with the closed-form tail certificate beyond
/// the last grid point.
pub fn scan_shape(shape: BinetShape, grid: &[f64], ctx: &PrecisionContext) -> Result<SignScan> {
    let t_end = grid.iter().cloned().fold(0.0, f64::max);
    scan_fn(grid, shape.sign_beyond(t_end), ctx, |t| shape.eval(t, ctx))
}

/// Sign scan of `g_n^{(j)}`, for `j ≤ 2n+2`.
pub fn kernel_sign_scan(n: u32, j: u32, grid: &[f64], ctx: &PrecisionContext) -> Result<SignScan> {
    if j > 2 * n + 2 {
        return Err(domain(format!("g_{n}^({j}): derivative order exceeds the zero at the origin ({})", 2 * n + 2)));
    }
    scan_shape(BinetShape::new(n as i32, 0, j)?, grid, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[1999], 60.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn g0_is_positive() {
        let ctx = PrecisionContext::new(30).unwrap();
        let s = kernel_sign_scan(0, 0, &log_grid(1e-3, 60.0, 200), &ctx).unwrap();
        assert!(s.passed());
        assert!(s.min_value.certainly_positive());
    }

    #[test]
    fn odd_derivative_has_witness() {
        let ctx = PrecisionContext::new(30).unwrap();
        let s = kernel_sign_scan(1, 3, &log_grid(1e-3, 60.0, 200), &ctx).unwrap();
        assert!(s.witness.is_some());
        assert!(!s.passed());
    }
}
