//! Check suites for the four propositions and the `m ≥ 80` spot check.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::degree::{degree_bracket, derivative_degree_bracket, f_half_factorial_scan, fprime_gap_scan, BracketConfig};
use super::scan::{kernel_sign_scan, log_grid, scan_fn};
use super::search::s_negativity_search;
use super::{Check, GridSummary, Status};
use crate::error::{domain, Error, Result};
use crate::hpreal::{format_float, HPReal};
use crate::kernels::{
    binet_g_deriv, eq_p_bound, f_lower_bound, k_bound, laguerre_kernel_f, laguerre_kernel_f_integral,
    laguerre_kernel_f_prime, laguerre_sum_f, partial_integral_closed_form, partial_integral_quadrature,
    s_kernel, s_kernel_prime, sin2_integral, BinetShape, KernelFamily, KernelSpec, Representation,
};
use crate::precision::PrecisionContext;
use crate::quadrature::{laplace_integral, legendre_formula_check, log_moment, log_moment_stated_form, osc_log_moment};
use crate::remainders::{ratio_bound, remainder_deriv, remainder_deriv_via_laplace, RemainderSpec};
use crate::special::util::factorial_float;
use crate::special::{laguerre, laguerre_derivative};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Proposition {
    P1,
    P2,
    P3,
    P4,
    #[serde(rename = "stray-m80")]
    StrayM80,
    #[serde(rename = "all")]
    All,
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::P1 => "P1",
            Self::P2 => "P2",
            Self::P3 => "P3",
            Self::P4 => "P4",
            Self::StrayM80 => "stray-m80",
            Self::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Proposition {
    type Err = Error;

    /// Accepts `1`..`4`, `P1`..`P4`, `m80`, `stray-m80` and `all`.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "1" | "p1" => Self::P1,
            "2" | "p2" => Self::P2,
            "3" | "p3" => Self::P3,
            "4" | "p4" => Self::P4,
            "m80" | "stray-m80" => Self::StrayM80,
            "all" => Self::All,
            _ => return Err(domain(format!("unknown proposition {s:?}"))),
        })
    }
}

/// Knobs for the check suites.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub bracket: BracketConfig,
    /// Points of the `|s'| ≤ 1/12` grid on `[0, 10⁴]`.
    pub s_prime_points: usize,
    pub s_search_t_max: f64,
    pub s_search_budget: u64,
    pub m80_list: Vec<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            bracket: BracketConfig::default(),
            s_prime_points: 1001,
            s_search_t_max: super::search::DEFAULT_T_MAX,
            s_search_budget: 200_000_000,
            m80_list: vec![80, 100],
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub proposition: Proposition,
    pub checks: Vec<Check>,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckCounts {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationJson {
    pub target: String,
    pub checks: Vec<Check>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub witness: Option<String>,
    pub summary: CheckCounts,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    pub fn counts(&self) -> CheckCounts {
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        CheckCounts {
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
        }
    }

    /// Every check passed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// No decided check failed.
    pub fn no_failures(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> VerificationJson {
        VerificationJson {
            target: self.proposition.to_string(),
            checks: self.checks.clone(),
            lo: None,
            hi: None,
            witness: None,
            summary: self.counts(),
            elapsed_seconds: self.elapsed_seconds,
        }
    }
}

/// Runs `f`, turning engine errors into an inconclusive check.
fn guarded(name: String, grid: String, tolerance: f64, f: impl FnOnce() -> Result<Check>) -> Check {
    match f() {
        Ok(c) => c,
        Err(e) => Check::inconclusive(name, grid, tolerance, e.to_string()),
    }
}

fn label(grid: &[f64]) -> String {
    GridSummary::of(grid).to_string()
}

fn points(ts: &[f64]) -> String {
    let v: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
    format!("t in {{{}}}", v.join(", "))
}

/// Largest discrepancy over a list of identity evaluations.
fn max_discrepancy(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |acc, d| Ok(acc.max(d?)))
}

pub fn verify_proposition(id: Proposition, cfg: &VerifyConfig, ctx: &PrecisionContext) -> VerificationReport {
    let start = Instant::now();
    let checks = match id {
        Proposition::P1 => p1(cfg, ctx),
        Proposition::P2 => p2(cfg, ctx),
        Proposition::P3 => p3(cfg, ctx),
        Proposition::P4 => p4(cfg, ctx),
        Proposition::StrayM80 => stray_checks(&cfg.m80_list, ctx),
        Proposition::All => {
            let mut all = Vec::new();
            for (tag, mut part) in [
                ("P1", p1(cfg, ctx)),
                ("P2", p2(cfg, ctx)),
                ("P3", p3(cfg, ctx)),
                ("P4", p4(cfg, ctx)),
                ("stray-m80", stray_checks(&cfg.m80_list, ctx)),
            ] {
                for c in &mut part {
                    c.name = format!("{tag}: {}", c.name);
                }
                all.append(&mut part);
            }
            all
        }
    };
    VerificationReport {
        proposition: id,
        checks,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

fn p1(cfg: &VerifyConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let grid = &cfg.bracket.grid;
    let gl = label(grid);
    let mut out = Vec::new();
    for n in 1..=3u32 {
        let name = format!("g_{n}^({}) > 0", 2 * n);
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            Ok(Check::positivity(name, gl.clone(), &kernel_sign_scan(n, 2 * n, grid, ctx)?))
        }));
    }
    for n in 1..=3u32 {
        let name = format!("g_{n}^({}) takes a negative value", 2 * n + 1);
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            Ok(Check::negativity(name, gl.clone(), &kernel_sign_scan(n, 2 * n + 1, grid, ctx)?))
        }));
    }

    let ts = [0.5, 1.0, 10.0];
    for n in 1..=3u32 {
        let name = format!("cosine moment of theta for g_{n}^({}) is positive", 2 * n);
        out.push(guarded(name.clone(), points(&ts), 0.0, || {
            let vals = ts
                .iter()
                .map(|&t| osc_log_moment(n, &ctx.float(t), ctx).map(|r| r.value))
                .collect::<Result<Vec<_>>>()?;
            let min = vals.iter().min_by(|a, b| a.value().total_cmp(b.value())).unwrap();
            Ok(Check::measured(
                name,
                points(&ts),
                format_float(min.value(), 12),
                0.0,
                vals.iter().all(HPReal::certainly_positive),
            ))
        }));
        let name = format!("cosine moment matches series for g_{n}^({})", 2 * n);
        out.push(guarded(name.clone(), "t = 1".into(), 1e-20, || {
            let t = ctx.float(1);
            let q = osc_log_moment(n, &t, ctx)?;
            let s = binet_g_deriv(n, 2 * n, &t, ctx)?;
            Ok(Check::agreement(name, "t = 1".into(), q.value.abs_diff(&s), 1e-20))
        }));
    }

    for n in 1..=3u32 {
        let name = format!("-x R_{n}'/R_{n} within 1e-2 of {} at x = 1e-3", 2 * n - 1);
        out.push(guarded(name.clone(), "x = 1e-3".into(), 1e-2, || {
            let r = ratio_bound(n, &ctx.float(1e-3), ctx)?;
            let d = (r.to_f64() - (2 * n - 1) as f64).abs() + r.err_bound();
            Ok(Check::measured(name, "x = 1e-3".into(), format_float(r.value(), 12), 1e-2, d <= 1e-2))
        }));
    }

    for n in 2..=3u32 {
        let spec = RemainderSpec::new(n, 0);
        let name = format!("degree bracket of R_{n} inside [{}, {}]", 2 * (n - 1), 2 * n - 1);
        out.push(guarded(name.clone(), gl.clone(), 1e-2, || {
            let levels: Vec<f64> = (0..=2 * n).map(f64::from).collect();
            let r = degree_bracket(&spec, &levels, &cfg.bracket, ctx)?;
            let ok = r.lo >= (2 * (n - 1)) as f64 && r.hi <= (2 * n - 1) as f64 + 1e-2;
            Ok(Check::measured(name, gl.clone(), format!("lo = {}, hi = {:.9}", r.lo, r.hi), 1e-2, ok))
        }));
    }

    for n in 0..=2u32 {
        let name = format!("log moment n = {n} against -2 (2n)! zeta(2n+2)");
        out.push(guarded(name.clone(), "(0, inf)".into(), 1e-20, || {
            let r = log_moment(n, ctx)?;
            Ok(Check::agreement(name, "(0, inf)".into(), r.discrepancy(), 1e-20))
        }));
        let name = format!("log moment n = {n} against (-1)^(n+1) (2pi)^(2n+2) 2^(2n) B_(2n+2)/((2n+2)(2n+1))");
        out.push(guarded(name.clone(), "(0, inf)".into(), 1e-20, || {
            let r = log_moment(n, ctx)?;
            let d = r.quadrature.value.abs_diff(&log_moment_stated_form(n, ctx));
            Ok(Check::agreement(name, "(0, inf)".into(), d, 1e-20))
        }));
    }

    let ts = [1e-3, 1.0, 5.0];
    let name = "Legendre integral of sin(xt)/(e^x - 1)".to_string();
    out.push(guarded(name.clone(), points(&ts), 1e-20, || {
        let d = max_discrepancy(ts.iter().map(|&t| legendre_formula_check(&ctx.float(t), ctx).map(|r| r.discrepancy())))?;
        Ok(Check::agreement(name, points(&ts), d, 1e-20))
    }));
    out
}

fn p2(cfg: &VerifyConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let mut out = Vec::new();
    let xs = [0.5, 2.0, 10.0];
    let xl = "x in {0.5, 2, 10}".to_string();
    for m in 2..=4u32 {
        let name = format!("Laplace form of R_0^({m}) against polygamma");
        out.push(guarded(name.clone(), xl.clone(), 1e-25, || {
            let d = max_discrepancy(xs.iter().map(|&x| {
                let x = ctx.float(x);
                let q = remainder_deriv_via_laplace(0, m, &x, ctx)?;
                Ok(q.value.abs_diff(&remainder_deriv(0, m, &x, ctx)?))
            }))?;
            Ok(Check::agreement(name, xl.clone(), d, 1e-25))
        }));
        let name = format!("x^{} R_0^({m}) is the transform of f_{m} - {}!/2", m - 1, m - 1);
        out.push(guarded(name.clone(), xl.clone(), 1e-25, || {
            let shape = BinetShape::new(-1, m, m - 1)?;
            let d = max_discrepancy(xs.iter().map(|&x| {
                let xf = ctx.float(x);
                let q = laplace_integral(&shape, &xf, ctx)?;
                let pow = Float::with_val(ctx.bits() + 16, xf.clone().pow(m - 1));
                let r = remainder_deriv(0, m, &xf, ctx)?.scale(&pow);
                Ok(q.value.abs_diff(&r))
            }))?;
            Ok(Check::agreement(name, xl.clone(), d, 1e-25))
        }));
    }

    let ts = [0.5, 2.0, 5.0];
    for m in 2..=8u32 {
        let name = format!("f_{m}: Laguerre sum against integral of s(tu) u^{} e^-u", m - 1);
        out.push(guarded(name.clone(), points(&ts), 1e-20, || {
            let d = max_discrepancy(ts.iter().map(|&t| {
                let t = ctx.float(t);
                let q = laguerre_kernel_f_integral(m, &t, ctx)?;
                Ok(q.value.abs_diff(&laguerre_sum_f(m, &t, ctx)?))
            }))?;
            Ok(Check::agreement(name, points(&ts), d, 1e-20))
        }));
    }

    let s0 = s_kernel(&ctx.float(0), ctx);
    out.push(Check::agreement(
        "s(0) = 1/2".into(),
        "t = 0".into(),
        s0.abs_diff(&HPReal::exact(ctx.float(0.5))),
        ctx.series_tol(),
    ));

    let r = s_negativity_search(cfg.s_search_t_max, cfg.s_search_budget, ctx);
    let grid = format!("walk on [0, {}]", cfg.s_search_t_max);
    let name = "s takes a negative value".to_string();
    out.push(match &r.witness {
        Some((t, v)) => Check::measured(name, grid, format_float(v.value(), 12), 0.0, true)
            .with_note(format!("s({t}) < 0")),
        None => Check::inconclusive(
            name,
            grid,
            0.0,
            format!(
                "not found in scanned range: s > 0 on [0, {}], minimum {} at t = {}",
                r.reached,
                format_float(r.min_value.value(), 12),
                r.min_at
            ),
        ),
    });
    out
}

fn p3(cfg: &VerifyConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let grid = &cfg.bracket.grid;
    let gl = label(grid);
    let mut out = Vec::new();
    for m in 2..=10u32 {
        let name = format!("f_{m}(t) >= {}!/2 for t >= 2 log 3", m - 1);
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            Ok(Check::positivity(name, gl.clone(), &f_half_factorial_scan(m, grid, ctx)?))
        }));
    }
    for m in 2..=10u32 {
        let name = format!("f_{m}(t) >= {}! (1 - e^(-t/2)/(1 - e^(-t/2)))", m - 1);
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            let scan = scan_fn(grid, None, ctx, |t| Ok(&laguerre_kernel_f(m, t, ctx)? - &f_lower_bound(m, t, ctx)?))?;
            Ok(Check::grid_positivity(name, gl.clone(), &scan))
        }));
    }

    let ts = [1.0, 3.0, 6.0];
    for m in 3..=5u32 {
        let name = format!("integral of f_{m} - {}!/2 against its closed form", m - 1);
        out.push(guarded(name.clone(), points(&ts), 1e-15, || {
            let d = max_discrepancy(ts.iter().map(|&t| {
                let t = ctx.float(t);
                Ok(partial_integral_quadrature(m, &t, ctx)?
                    .value
                    .abs_diff(&partial_integral_closed_form(m, &t, ctx)?))
            }))?;
            Ok(Check::agreement(name, points(&ts), d, 1e-15))
        }));
        let name = format!("sin^2 representation of the f_{m} integral");
        out.push(guarded(name.clone(), points(&ts), 1e-12, || {
            let d = max_discrepancy(ts.iter().map(|&t| {
                let t = ctx.float(t);
                Ok(sin2_integral(m, &t, ctx)?
                    .value
                    .abs_diff(&partial_integral_closed_form(m, &t, ctx)?))
            }))?;
            Ok(Check::agreement(name, points(&ts), d, 1e-12))
        }));
    }

    let name = "|L_m(t)| <= e^(t/2) for m <= 60".to_string();
    out.push(guarded(name.clone(), gl.clone(), 0.0, || {
        let scan = scan_fn(grid, None, ctx, |t| {
            let half = Float::with_val(ctx.bits() + 16, t / 2u32).exp();
            let mut worst: Option<HPReal> = None;
            for m in 0..=60 {
                let l = laguerre(m, t, ctx).abs();
                // 1 - |L_m| e^{-t/2}
                let margin = &HPReal::exact(ctx.float(1)) - &(&l / &HPReal::exact(half.clone()));
                if worst.as_ref().is_none_or(|w| margin.value() < w.value()) {
                    worst = Some(margin);
                }
            }
            Ok(worst.unwrap())
        })?;
        Ok(Check::grid_positivity(name, gl.clone(), &scan))
    }));

    for m in 3..=8u32 {
        let name = format!("derivative bracket of R_0^({m}) has lo >= {}", m - 2);
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            let r = derivative_degree_bracket(0, m, &cfg.bracket, ctx)?;
            Ok(Check::measured(
                name,
                gl.clone(),
                format!("lo = {}, hi = {:.9}", r.lo, r.hi),
                0.0,
                r.lo >= (m - 2) as f64,
            ))
        }));
    }
    out
}

fn p4(cfg: &VerifyConfig, ctx: &PrecisionContext) -> Vec<Check> {
    let grid = &cfg.bracket.grid;
    let gl = label(grid);
    let mut out = Vec::new();

    let s_grid: Vec<f64> = (0..cfg.s_prime_points)
        .map(|i| 1e4 * i as f64 / (cfg.s_prime_points - 1) as f64)
        .collect();
    let sl = format!("{} points on [0, 10000]", s_grid.len());
    let name = "|s'(t)| <= 1/12".to_string();
    out.push(guarded(name.clone(), sl.clone(), 0.0, || {
        let twelfth = HPReal::exact(Float::with_val(ctx.bits() + 16, 12u32).recip());
        // Equality holds at t = 0; the bound is strict elsewhere.
        let at0 = &twelfth - &s_kernel_prime(&ctx.float(0), ctx);
        let inner: Vec<f64> = s_grid.iter().cloned().filter(|&t| t > 0.0).collect();
        let scan = scan_fn(&inner, None, ctx, |t| Ok(&twelfth - &s_kernel_prime(t, ctx).abs()))?;
        let c = Check::grid_positivity(name, sl.clone(), &scan);
        if at0.abs_diff(&HPReal::exact(ctx.float(0))) > at0.err_bound() {
            return Ok(Check::measured(c.name, c.grid, c.min_value, 0.0, false).with_note("s'(0) differs from 1/12"));
        }
        Ok(if c.pass { c.with_note("equality at t = 0") } else { c })
    }));

    for m in 2..=4u32 {
        let name = format!("f'_{m}(1e-6) against {m}!/12");
        out.push(guarded(name.clone(), "t = 1e-6".into(), 1e-8, || {
            let v = laguerre_kernel_f_prime(m, &ctx.float(1e-6), ctx)?;
            let d = v.abs_diff(&HPReal::exact(factorial_float(m, ctx.bits()) / 12u32)) + v.err_bound();
            Ok(Check::agreement(name, "t = 1e-6".into(), d, 1e-8))
        }));
    }

    for m in 1..=8u32 {
        let name = format!("t f'_{m}(t) <= 2 {m}! e^(-t/2)/(1-e^(-t/2)) + {}! t/(4 sinh^2(t/4))", m - 1);
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            let scan = scan_fn(grid, None, ctx, |t| {
                let lhs = laguerre_kernel_f_prime(m, t, ctx)?.scale(t);
                Ok(&eq_p_bound(m, t, ctx)? - &lhs)
            })?;
            Ok(Check::grid_positivity(name, gl.clone(), &scan))
        }));
    }

    let far: Vec<f64> = grid.iter().cloned().filter(|&t| t >= 6.0).collect();
    let fl = label(&far);
    for m in 1..=10u32 {
        let name = format!("K(t, {m}) >= 0 for t >= 6");
        out.push(guarded(name.clone(), fl.clone(), 0.0, || {
            let scan = scan_fn(&far, None, ctx, |t| k_bound(t, m, ctx))?;
            Ok(Check::grid_positivity(name, fl.clone(), &scan))
        }));
    }

    let name = "K(6, 1) > 0.1".to_string();
    out.push(guarded(name.clone(), "t = 6".into(), 0.1, || {
        let k = k_bound(&ctx.float(6), 1, ctx)?;
        Ok(Check::measured(name, "t = 6".into(), format_float(k.value(), 15), 0.1, k.to_f64() - k.err_bound() > 0.1))
    }));

    for m in 1..=8u32 {
        let name = format!("{m}!/12 - f'_{m}(t) >= 0");
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            Ok(Check::positivity(name, gl.clone(), &fprime_gap_scan(m, grid, ctx)?))
        }));
    }

    let ts = log_grid(1e-2, 60.0, 25);
    let tol = ctx.series_tol() * 1e3;
    let name = "t L_m'(t) = m (L_m(t) - L_(m-1)(t)) for m <= 10".to_string();
    out.push(guarded(name.clone(), label(&ts), tol, || {
        let mut worst = 0.0f64;
        for m in 1..=10u32 {
            for &t in &ts {
                let t = ctx.float(t);
                let lhs = laguerre_derivative(m, &t, ctx).scale(&t);
                let rhs = (&laguerre(m, &t, ctx) - &laguerre(m - 1, &t, ctx)).scale(&ctx.float(m));
                worst = worst.max(lhs.abs_diff(&rhs) / (1.0 + lhs.to_f64().abs()));
            }
        }
        Ok(Check::agreement(name, label(&ts), worst, tol))
    }));

    for m in 1..=6u32 {
        let name = format!("derivative bracket of R_1^({m}) has lo >= {m}");
        out.push(guarded(name.clone(), gl.clone(), 0.0, || {
            let r = derivative_degree_bracket(1, m, &cfg.bracket, ctx)?;
            Ok(Check::measured(name, gl.clone(), format!("lo = {}, hi = {:.9}", r.lo, r.hi), 0.0, r.lo >= m as f64))
        }));
    }
    out
}

/// `t* = sqrt(252/((m+4)(m+3)))`.
pub fn stray_point(m: u32) -> f64 {
    (252.0 / (f64::from(m + 4) * f64::from(m + 3))).sqrt()
}

fn stray_checks(ms: &[u32], ctx: &PrecisionContext) -> Vec<Check> {
    ms.iter()
        .map(|&m| {
            let t = stray_point(m);
            let grid = format!("t = {t}");
            let name = format!("f'_{m}(sqrt(252/({}*{}))) < 0", m + 4, m + 3);
            guarded(name.clone(), grid.clone(), 0.0, || {
                if m < 80 {
                    return Err(domain(format!("the spot check covers m >= 80, got {m}")));
                }
                let tf = ctx.float(t);
                let v = laguerre_kernel_f_prime(m, &tf, ctx)?;
                let sum = KernelSpec::new(KernelFamily::LaguerreF, m, 1)?
                    .with_representation(Representation::LaguerreSum)
                    .evaluate(&tf, ctx)?;
                let c = Check::measured(name, grid, format_float(v.value(), 15), 0.0, v.certainly_negative());
                Ok(if v.consistent_with(&sum) {
                    c.with_note("series and Laguerre sum agree")
                } else {
                    c.with_note("series and Laguerre sum disagree")
                })
            })
        })
        .collect()
}

/// The `m ≥ 80` spot check as its own report.
pub fn stray_m80_check(ms: &[u32], ctx: &PrecisionContext) -> VerificationReport {
    let start = Instant::now();
    VerificationReport {
        proposition: Proposition::StrayM80,
        checks: stray_checks(ms, ctx),
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}
