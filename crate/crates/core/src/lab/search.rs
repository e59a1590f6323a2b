//! Best-effort search for a point where `s(t) < 0`.
//!
//! The scan walks up from `t = 0` with steps `12 (s(t) - err)`: since
//! `|s'| ≤ 1/12`, no zero of `s` can hide inside such a step, so the walk
//! either finds a negative value or shows `s > 0` on everything it covered.

use rug::Float;

use crate::hpreal::HPReal;
use crate::kernels::{s_kernel, s_kernel_f64};
use crate::precision::PrecisionContext;

/// Default number of sine terms the search may spend.
pub const DEFAULT_TERM_BUDGET: u64 = 2_000_000_000;
pub const DEFAULT_T_MAX: f64 = 1e8;
const MIN_STEP: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// First certified-negative point.
    pub witness: Option<(f64, HPReal)>,
    /// `s` is positive on `[0, reached)` unless a witness was found.
    pub reached: f64,
    pub min_at: f64,
    pub min_value: HPReal,
    pub evaluations: u64,
    pub terms: u64,
}

fn hp(t: f64, ctx: &PrecisionContext) -> HPReal {
    s_kernel(&Float::with_val(ctx.bits(), t), ctx)
}

/// Walks `s` over `(0, t_max]` until the term budget runs out.
pub fn s_negativity_search(t_max: f64, term_budget: u64, ctx: &PrecisionContext) -> SearchOutcome {
    let mut t = 0.0f64;
    let (mut min_at, mut min_v) = (0.0, 0.5);
    let mut evaluations = 0;
    let mut terms = 0u64;
    let mut witness = None;
    while t < t_max && terms < term_budget {
        let (v, e) = s_kernel_f64(t);
        evaluations += 1;
        terms += (t / (2.0 * std::f64::consts::PI)).ceil() as u64 + 16;
        if v < min_v {
            min_v = v;
            min_at = t;
        }
        let mut lower = v - e;
        if lower <= 1e-6 {
            let s = hp(t, ctx);
            if s.certainly_negative() {
                witness = Some((t, s));
                break;
            }
            lower = s.to_f64() - s.err_bound();
        }
        t += (12.0 * lower).max(MIN_STEP);
    }
    SearchOutcome {
        witness,
        reached: t.min(t_max),
        min_at,
        min_value: hp(min_at, ctx),
        evaluations,
        terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_below_a_thousand() {
        let ctx = PrecisionContext::new(30).unwrap();
        let r = s_negativity_search(1e3, DEFAULT_TERM_BUDGET, &ctx);
        assert!(r.witness.is_none());
        assert_eq!(r.reached, 1e3);
        assert!(r.min_value.certainly_positive());
        assert!(r.min_value.to_f64() < 0.5);
    }
}
