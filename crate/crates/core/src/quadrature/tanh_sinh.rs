//! Tanh-sinh quadrature on finite intervals.
//!
//! Abscissae are kept as distances `δ = 1 - tanh((π/2) sinh u)` to the
//! endpoints so that nodes crowding an endpoint keep full relative accuracy.
//! Each level halves the step and only evaluates the new odd nodes.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use rayon::prelude::*;
use rug::float::Constant;
use rug::Float;

use super::QuadratureResult;
use crate::error::{Error, Result};
use crate::hpreal::{abs_up, sum_bounds, HPReal};

pub const MAX_LEVELS: u32 = 12;
/// Cap on the nodes added by a single level.
pub const MAX_NODES: u64 = 1 << 15;
pub const MIN_LEVELS: u32 = 3;

#[derive(Debug)]
struct Node {
    delta: Float,
    weight: Float,
}

type NodeTable = Arc<Vec<Node>>;

// Nodes depend only on (precision, level); shared across calls and threads.
static NODES: LazyLock<Mutex<HashMap<(u32, u32), NodeTable>>> = LazyLock::new(Default::default);

fn level_nodes(prec: u32, level: u32) -> NodeTable {
    if let Some(t) = NODES.lock().expect("node cache poisoned").get(&(prec, level)) {
        return t.clone();
    }
    let table = Arc::new(build_level(prec, level));
    NODES
        .lock()
        .expect("node cache poisoned")
        .entry((prec, level))
        .or_insert(table)
        .clone()
}

fn build_level(prec: u32, level: u32) -> Vec<Node> {
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let cutoff = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 16));
    let h = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
    let step = if level == 0 { 1 } else { 2 };
    let mut k = 1u64;
    let mut out = Vec::new();
    loop {
        let u = Float::with_val(prec, &h * k);
        let s = Float::with_val(prec, u.sinh_ref()) * &half_pi;
        let e = Float::with_val(prec, -(s * 2u32)).exp();
        let one_plus = Float::with_val(prec, &e + 1u32);
        let delta = Float::with_val(prec, &e * 2u32) / &one_plus;
        let weight = Float::with_val(prec, u.cosh_ref()) * &half_pi * 4u32 * &e / one_plus.square();
        if weight < cutoff || delta.is_zero() {
            break;
        }
        out.push(Node { delta, weight });
        k += step;
    }
    out
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The error bound is the last level difference plus the propagated
/// evaluation errors and the rounding of the weighted sum.
pub fn integrate<F>(f: &F, a: &Float, b: &Float, tol: f64, prec: u32) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Result<HPReal> + Sync,
{
    let u = 2f64.powi(1 - prec as i32);
    let a = Float::with_val(prec, a);
    let b = Float::with_val(prec, b);
    let half = Float::with_val(prec, &b - &a) / 2u32;
    let center = Float::with_val(prec, &a + &half);
    let half_abs = abs_up(&half);

    let mut weighted = Float::new(prec); // Σ w f over all nodes so far
    let mut prop = 0.0; // Σ w err(f)
    let mut magnitude = 0.0; // Σ w |f|
    let mut nodes_used = 0u64;
    let mut prev: Option<Float> = None;
    let mut differences = Vec::new();

    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let center_val = f(&center)?;
    weighted += Float::with_val(prec, center_val.value() * &half_pi);
    let hp = half_pi.to_f64();
    prop += hp * center_val.err_bound();
    magnitude += hp * abs_up(center_val.value());
    nodes_used += 1;

    for level in 0..=MAX_LEVELS {
        let nodes = level_nodes(prec, level);
        let points: Vec<(Float, Float)> = nodes
            .iter()
            .map(|n| {
                let off = Float::with_val(prec, &half * &n.delta);
                (Float::with_val(prec, &a + &off), Float::with_val(prec, &b - &off))
            })
            .collect();
        let values: Vec<Result<(HPReal, HPReal)>> = points
            .par_iter()
            .map(|(l, r)| Ok((f(l)?, f(r)?)))
            .collect();
        for (node, v) in nodes.iter().zip(values) {
            let (fl, fr) = v?;
            let pair = Float::with_val(prec, fl.value() + fr.value());
            let w = abs_up(&node.weight);
            weighted += Float::with_val(prec, &pair * &node.weight);
            prop += w * (fl.err_bound() + fr.err_bound());
            magnitude += w * (abs_up(fl.value()) + abs_up(fr.value()));
        }
        nodes_used += 2 * nodes.len() as u64;

        let h = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
        let estimate = Float::with_val(prec, &weighted * &h) * &half;
        let hf = h.to_f64();
        if let Some(p) = &prev {
            let diff = abs_up(&Float::with_val(prec, &estimate - p));
            differences.push(diff);
            let done = level + 1 >= MIN_LEVELS && diff <= tol;
            let capped = level < MAX_LEVELS && 2 * level_nodes(prec, level + 1).len() as u64 > MAX_NODES;
            if done || capped || level == MAX_LEVELS {
                if !done {
                    return Err(Error::NonConvergence {
                        levels: level + 1,
                        last_difference: diff,
                        tolerance: tol,
                    });
                }
                let round = u * half_abs * hf * magnitude * (level as f64 + 8.0);
                let err = sum_bounds(&[diff, half_abs * hf * prop, round, u * abs_up(&estimate)]);
                return Ok(QuadratureResult {
                    value: HPReal::new(estimate, err),
                    nodes_used,
                    refinement_levels: level + 1,
                    converged: true,
                    differences,
                });
            }
        }
        prev = Some(estimate);
    }
    unreachable!("the level loop returns at MAX_LEVELS")
}

/// Sums [`integrate`] over consecutive segments `[p_i, p_{i+1}]`, splitting
/// the tolerance evenly.
pub fn integrate_segments<F>(f: &F, points: &[Float], tol: f64, prec: u32) -> Result<QuadratureResult>
where
    F: Fn(&Float) -> Result<HPReal> + Sync,
{
    assert!(points.len() >= 2, "need at least one segment");
    let per = tol / (points.len() - 1) as f64;
    let mut total: Option<QuadratureResult> = None;
    for w in points.windows(2) {
        let r = integrate(f, &w[0], &w[1], per, prec)?;
        total = Some(match total {
            None => r,
            Some(acc) => acc.combine(r),
        });
    }
    Ok(total.expect("at least one segment"))
}
