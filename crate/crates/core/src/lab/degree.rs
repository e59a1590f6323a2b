//! Degree brackets `lo ≤ deg < hi` for `(-1)^m R_n^{(m)}`.
//!
//! Integer levels `j` are tested by scanning the kernel `d^j[t^m g_{n-1}]`
//! of `x^j (-1)^m R_n^{(m)}`; the top is further capped by the infimum of
//! `x F'(x)/F(x)` over an `x` grid.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use super::scan::{default_grid, scan_fn, scan_shape, SignScan};
use super::tables::Conjecture;
use super::{Check, GridSummary};
use crate::error::{domain, Result};
use crate::hpreal::{format_float, HPReal};
use crate::kernels::{f_lower_bound, k_bound, laguerre_kernel_f, laguerre_kernel_f_prime, partial_integral_closed_form, BinetShape};
use crate::precision::PrecisionContext;
use crate::remainders::{ratio_bound, remainder_deriv, RemainderSpec};
use crate::special::util::factorial_float;

/// Grids used by the bracket searches.
#[derive(Debug, Clone)]
pub struct BracketConfig {
    pub grid: Vec<f64>,
    pub x_range: (f64, f64),
    pub x_points: usize,
}

impl Default for BracketConfig {
    fn default() -> Self {
        Self {
            grid: default_grid(),
            x_range: (1e-3, 1e3),
            x_points: 49,
        }
    }
}

/// Where the upper end of a bracket comes from.
#[derive(Debug, Clone)]
pub enum Witness {
    /// The level kernel is certainly negative at `t`.
    Kernel { level: u32, t: f64, value: HPReal },
    /// `x F'(x)/F(x)` at `x` caps every admissible level.
    Ratio { x: f64, value: HPReal },
}

impl Witness {
    pub fn point(&self) -> f64 {
        match self {
            Witness::Kernel { t, .. } => *t,
            Witness::Ratio { x, .. } => *x,
        }
    }

    pub fn value(&self) -> &HPReal {
        match self {
            Witness::Kernel { value, .. } | Witness::Ratio { value, .. } => value,
        }
    }
}

/// Pointwise minimum of the ratio cap.
#[derive(Debug, Clone)]
pub struct RatioMinimum {
    pub x: f64,
    pub value: HPReal,
}

impl RatioMinimum {
    /// Upper end of the error bar.
    pub fn cap(&self) -> f64 {
        self.value.to_f64() + self.value.err_bound()
    }
}

/// Evidence for the completely monotonic degree of one target.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    pub target: RemainderSpec,
    /// Largest level whose kernel scan passed.
    pub lo: f64,
    /// Smallest level known to fail.
    pub hi: f64,
    pub grid: Vec<f64>,
    /// Samples of the `lo`-level kernel.
    pub lo_samples: Vec<(f64, HPReal)>,
    pub min_kernel_value: Option<HPReal>,
    pub witness: Option<Witness>,
    pub ratio: Option<RatioMinimum>,
    /// Upper end asserted analytically but not checked here.
    pub claimed_upper: Option<f64>,
    pub conjecture_tag: Option<Conjecture>,
    pub checks: Vec<Check>,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub kind: &'static str,
    pub level: Option<u32>,
    pub point: f64,
    pub value: String,
    pub err_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeJson {
    pub target: String,
    pub checks: Vec<Check>,
    pub lo: f64,
    pub hi: Option<f64>,
    pub witness: Option<WitnessJson>,
    pub claimed_upper: Option<f64>,
    pub conjecture_tag: Option<String>,
    pub min_kernel_value: Option<String>,
    pub grid: GridSummary,
    pub elapsed_seconds: f64,
}

impl DegreeReport {
    pub fn to_json(&self) -> DegreeJson {
        let witness = self.witness.as_ref().map(|w| match w {
            Witness::Kernel { level, t, value } => WitnessJson {
                kind: "kernel",
                level: Some(*level),
                point: *t,
                value: format_float(value.value(), 20),
                err_bound: value.err_bound(),
            },
            Witness::Ratio { x, value } => WitnessJson {
                kind: "ratio",
                level: None,
                point: *x,
                value: format_float(value.value(), 20),
                err_bound: value.err_bound(),
            },
        });
        DegreeJson {
            target: self.target.to_string(),
            checks: self.checks.clone(),
            lo: self.lo,
            hi: self.hi.is_finite().then_some(self.hi),
            witness,
            claimed_upper: self.claimed_upper,
            conjecture_tag: self.conjecture_tag.map(|c| c.to_string()),
            min_kernel_value: self.min_kernel_value.as_ref().map(|v| format_float(v.value(), 20)),
            grid: GridSummary::of(&self.grid),
            elapsed_seconds: self.elapsed_seconds,
        }
    }

    /// `t,value,err_bound` rows of the `lo`-level kernel.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("t,value,err_bound\n");
        for (t, v) in &self.lo_samples {
            out.push_str(&format!("{t},{},{:.3e}\n", format_float(v.value(), digits), v.err_bound()));
        }
        out
    }
}

/// `d^j [t^m g_{n-1}]`, the kernel of `x^j (-1)^m R_n^{(m)}`.
pub fn level_kernel(spec: &RemainderSpec, level: u32) -> Result<BinetShape> {
    BinetShape::new(spec.n as i32 - 1, spec.m, level)
}

/// `x F'(x)/F(x)` with `F = (-1)^m R_n^{(m)}`; bounds the degree from above.
pub fn ratio_for(spec: &RemainderSpec, x: &Float, ctx: &PrecisionContext) -> Result<HPReal> {
    if spec.m == 0 {
        return ratio_bound(spec.n, x, ctx);
    }
    let f = remainder_deriv(spec.n, spec.m, x, ctx)?;
    if !f.certainly_positive() {
        return Err(domain(format!("{spec} at {} is not certified positive", x.to_f64())));
    }
    let d = remainder_deriv(spec.n, spec.m + 1, x, ctx)?;
    Ok(&d.scale(x) / &f)
}

const GOLDEN_STEPS: usize = 40;

/// Infimum of [`ratio_for`] over `x_range`: log grid, then golden-section
/// search in the cells next to the grid minimum.
pub fn ratio_infimum_for(
    spec: &RemainderSpec,
    x_range: (f64, f64),
    points: usize,
    ctx: &PrecisionContext,
) -> Result<RatioMinimum> {
    let (lo, hi) = x_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(domain(format!("bad x range [{lo}, {hi}]")));
    }
    let grid = super::scan::log_grid(lo, hi, points.max(3));
    let vals = grid
        .par_iter()
        .map(|&x| ratio_for(spec, &ctx.float(x), ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut i = 0;
    for (k, v) in vals.iter().enumerate() {
        if v.value() < vals[i].value() {
            i = k;
        }
    }
    let mut best = RatioMinimum {
        x: grid[i],
        value: vals[i].clone(),
    };

    let eval = |u: f64| -> Result<(f64, HPReal)> {
        let x = u.exp().clamp(lo, hi);
        Ok((x, ratio_for(spec, &ctx.float(x), ctx)?))
    };
    let mut a = grid[i.saturating_sub(1)].ln();
    let mut b = grid[(i + 1).min(grid.len() - 1)].ln();
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    for _ in 0..GOLDEN_STEPS {
        if fc.1.value() < fd.1.value() {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = eval(d)?;
        }
    }
    for (x, v) in [fc, fd] {
        if v.value() < best.value.value() {
            best = RatioMinimum { x, value: v };
        }
    }
    Ok(best)
}

/// Infimum of `-x R_n'(x)/R_n(x)` over `x_range`.
pub fn ratio_infimum(n: u32, x_range: (f64, f64), ctx: &PrecisionContext) -> Result<RatioMinimum> {
    ratio_infimum_for(&RemainderSpec::new(n, 0), x_range, BracketConfig::default().x_points, ctx)
}

/// Every integer level up to the order of the kernel's zero at the origin.
pub fn default_levels(spec: &RemainderSpec) -> Vec<f64> {
    let top = if spec.n == 0 { spec.m } else { 2 * spec.n + spec.m };
    (0..=top).map(f64::from).collect()
}

fn grid_label(grid: &[f64]) -> String {
    GridSummary::of(grid).to_string()
}

/// Brackets the degree of `(-1)^m R_n^{(m)}` by scanning the listed levels and
/// capping with the ratio infimum.
pub fn degree_bracket(
    spec: &RemainderSpec,
    levels: &[f64],
    cfg: &BracketConfig,
    ctx: &PrecisionContext,
) -> Result<DegreeReport> {
    let start = Instant::now();
    if levels.windows(2).any(|w| w[0] > w[1]) || levels.iter().any(|l| l.is_nan() || *l < 0.0) {
        return Err(domain("levels must be nonnegative and sorted"));
    }
    let label = grid_label(&cfg.grid);
    let shape0 = level_kernel(spec, 0)?;
    let mut report = DegreeReport {
        target: *spec,
        lo: 0.0,
        hi: f64::INFINITY,
        grid: cfg.grid.clone(),
        lo_samples: Vec::new(),
        min_kernel_value: None,
        witness: None,
        ratio: None,
        claimed_upper: None,
        conjecture_tag: Conjecture::for_target(spec),
        checks: Vec::new(),
        elapsed_seconds: 0.0,
    };

    for &level in levels {
        if level.fract() != 0.0 {
            // Fractional levels are decided by the ratio cap alone.
            continue;
        }
        let j = level as u32;
        let shape = BinetShape { deriv: j, ..shape0 };
        let name = format!("level {j} kernel d^{j}[t^{} g_{}] >= 0", spec.m, spec.n as i32 - 1);
        if i64::from(j) > shape.vanishing_order().max(0) {
            report.checks.push(Check::inconclusive(
                name,
                label.clone(),
                0.0,
                "boundary terms do not vanish at this level",
            ));
            break;
        }
        let scan = scan_shape(shape, &cfg.grid, ctx)?;
        report.checks.push(Check::positivity(name, label.clone(), &scan));
        if let Some((t, value)) = scan.witness.clone() {
            report.hi = level;
            report.witness = Some(Witness::Kernel { level: j, t, value });
            break;
        }
        if !scan.passed() {
            break;
        }
        report.lo = level;
        report.min_kernel_value = Some(scan.min_value.clone());
        report.lo_samples = scan.samples;
    }

    apply_ratio_cap(&mut report, cfg, ctx)?;
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn apply_ratio_cap(report: &mut DegreeReport, cfg: &BracketConfig, ctx: &PrecisionContext) -> Result<()> {
    let ratio = ratio_infimum_for(&report.target, cfg.x_range, cfg.x_points, ctx)?;
    let cap = ratio.cap();
    report.checks.push(Check::measured(
        format!("ratio infimum on [{}, {}]", cfg.x_range.0, cfg.x_range.1),
        format!("{} log points + golden section", cfg.x_points),
        format_float(ratio.value.value(), 15),
        0.0,
        cap > report.lo,
    ));
    if cap < report.hi {
        report.hi = cap;
        report.witness = Some(Witness::Ratio {
            x: ratio.x,
            value: ratio.value.clone(),
        });
    }
    report.ratio = Some(ratio);
    if !report.hi.is_finite() {
        return Err(crate::Error::Inconclusive(format!(
            "{}: no level failed and the ratio cap is unbounded",
            report.target
        )));
    }
    Ok(())
}

/// Brackets for `(-1)^m R_0^{(m)}` (`m ≥ 3`) and `(-1)^m R_1^{(m)}` (`m ≥ 1`):
/// the lower end is certified by one kernel scan, the analytic upper end is
/// recorded together with its supporting inequalities.
pub fn derivative_degree_bracket(n: u32, m: u32, cfg: &BracketConfig, ctx: &PrecisionContext) -> Result<DegreeReport> {
    let start = Instant::now();
    let spec = RemainderSpec::new(n, m);
    let label = grid_label(&cfg.grid);
    let (level, claimed, mut checks) = match n {
        0 if m >= 3 => (m - 2, m - 1, n0_supporting(m, cfg, ctx)?),
        1 if m >= 1 => (m, m + 1, n1_supporting(m, cfg, ctx)?),
        _ => {
            return Err(domain(format!(
                "derivative brackets cover n = 0 with m >= 3 and n = 1 with m >= 1, got n = {n}, m = {m}"
            )))
        }
    };

    let shape = level_kernel(&spec, level)?;
    let scan = scan_shape(shape, &cfg.grid, ctx)?;
    let mut report = DegreeReport {
        target: spec,
        lo: 0.0,
        hi: f64::INFINITY,
        grid: cfg.grid.clone(),
        lo_samples: Vec::new(),
        min_kernel_value: None,
        witness: None,
        ratio: None,
        claimed_upper: Some(claimed as f64),
        conjecture_tag: Conjecture::for_target(&spec),
        checks: Vec::new(),
        elapsed_seconds: 0.0,
    };
    report.checks.push(Check::positivity(
        format!("level {level} kernel d^{level}[t^{m} g_{}] >= 0", n as i32 - 1),
        label,
        &scan,
    ));
    report.checks.append(&mut checks);
    let (probe, upper) = upper_claim_probe(&spec, claimed, &cfg.grid, ctx)?;
    report.checks.push(probe);
    if scan.passed() {
        report.lo = level as f64;
        report.min_kernel_value = Some(scan.min_value.clone());
        report.lo_samples = scan.samples;
    } else if let Some((t, value)) = scan.witness {
        report.hi = level as f64;
        report.witness = Some(Witness::Kernel { level, t, value });
    }
    if let Some((t, value)) = upper.witness.clone() {
        if (claimed as f64) < report.hi {
            report.hi = claimed as f64;
            report.witness = Some(Witness::Kernel { level: claimed, t, value });
        }
    } else if upper.passed() && report.lo < claimed as f64 {
        report.lo = claimed as f64;
        report.min_kernel_value = Some(upper.min_value.clone());
        report.lo_samples = upper.samples;
    }
    apply_ratio_cap(&mut report, cfg, ctx)?;
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Looks for a negative value of the kernel at the claimed upper level. A
/// certified positive scan contradicts the claim on the desk range.
fn upper_claim_probe(
    spec: &RemainderSpec,
    level: u32,
    grid: &[f64],
    ctx: &PrecisionContext,
) -> Result<(Check, SignScan)> {
    let name = format!("level {level} kernel takes a negative value (claimed upper end)");
    let scan = scan_shape(level_kernel(spec, level)?, grid, ctx)?;
    let c = if scan.witness.is_some() || scan.passed() {
        Check::negativity(name, grid_label(grid), &scan)
    } else {
        Check::inconclusive(name, grid_label(grid), 0.0, "no witness and no certificate of positivity")
    };
    Ok((c, scan))
}

/// `f_m(t) ≥ (m-1)!/2` for `t ≥ 2 log 3`, checked on the grid.
pub fn f_half_factorial_scan(m: u32, grid: &[f64], ctx: &PrecisionContext) -> Result<SignScan> {
    let threshold = 2.0 * 3f64.ln();
    let sub: Vec<f64> = grid.iter().cloned().filter(|&t| t >= threshold).collect();
    let half = factorial_float(m - 1, ctx.bits() + 16) / 2u32;
    // f_m ≥ (m-1)! (1 - e^{-t/2}/(1-e^{-t/2})), which increases in t.
    let t_end = sub.last().copied().unwrap_or(threshold);
    let tail = f_lower_bound(m, &ctx.float(t_end), ctx)?
        .add_exact(&-half.clone())
        .certainly_positive()
        .then_some(Ordering::Greater);
    scan_fn(&sub, tail, ctx, |t| {
        Ok(laguerre_kernel_f(m, t, ctx)?.add_exact(&-half.clone()))
    })
}

fn n0_supporting(m: u32, cfg: &BracketConfig, ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let label = grid_label(&cfg.grid);
    let mut checks = Vec::new();
    let scan = scan_fn(&cfg.grid, level_kernel(&RemainderSpec::new(0, m), m - 2)?.sign_beyond(cfg.grid[cfg.grid.len() - 1]), ctx, |t| {
        partial_integral_closed_form(m, t, ctx)
    })?;
    checks.push(Check::positivity(
        format!("(d/dt)^{}[t^{} / (1-e^-t)] - {}! t/2 - {}! >= 0", m - 2, m - 1, m - 1, m - 2),
        label.clone(),
        &scan,
    ));
    let scan = f_half_factorial_scan(m, &cfg.grid, ctx)?;
    checks.push(Check::positivity(
        format!("f_{m}(t) - {}!/2 >= 0 for t >= 2 log 3", m - 1),
        label,
        &scan,
    ));
    Ok(checks)
}

/// `m!/12 - f'_m(t)` on the grid, with `(m-1)! K(T, m) > 0` at the last grid
/// point `T` as tail certificate (`K` increases in `t`).
pub fn fprime_gap_scan(m: u32, grid: &[f64], ctx: &PrecisionContext) -> Result<SignScan> {
    let t_end = grid.iter().cloned().fold(0.0, f64::max);
    let tail = k_bound(&ctx.float(t_end), m, ctx)?
        .certainly_positive()
        .then_some(Ordering::Greater);
    let top = factorial_float(m, ctx.bits() + 16) / 12u32;
    scan_fn(grid, tail, ctx, |t| Ok((-laguerre_kernel_f_prime(m, t, ctx)?).add_exact(&top)))
}

fn n1_supporting(m: u32, cfg: &BracketConfig, ctx: &PrecisionContext) -> Result<Vec<Check>> {
    let label = grid_label(&cfg.grid);
    let mut checks = Vec::new();
    let scan = fprime_gap_scan(m, &cfg.grid, ctx)?;
    checks.push(Check::positivity(format!("{m}!/12 - f'_{m}(t) >= 0"), label, &scan));

    let k6 = k_bound(&ctx.float(6), 1, ctx)?;
    checks.push(Check::measured(
        "K(6, 1) > 0.1".to_string(),
        "t = 6".to_string(),
        format_float(k6.value(), 15),
        0.1,
        k6.to_f64() - k6.err_bound() > 0.1,
    ));
    if m == 1 {
        return Ok(checks);
    }
    let sub: Vec<f64> = cfg.grid.iter().cloned().filter(|&t| t >= 4.0).collect();
    // The difference is (m-1) times an increasing function of t.
    let scan = scan_fn(&sub, Some(Ordering::Greater), ctx, |t| {
        Ok(&k_bound(t, m, ctx)? - &k_bound(t, 1, ctx)?)
    })?;
    checks.push(Check::positivity(
        format!("K(t, {m}) - K(t, 1) >= 0 for t >= 4"),
        GridSummary::of(&sub).to_string(),
        &scan,
    ));
    Ok(checks)
}
