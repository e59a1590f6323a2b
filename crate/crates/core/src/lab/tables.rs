//! The six conjectured degree formulas, as labels and as bracket tables.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::degree::{default_levels, degree_bracket, BracketConfig, DegreeReport, Witness};
use crate::error::{domain, Error, Result};
use crate::precision::PrecisionContext;
use crate::remainders::RemainderSpec;

/// Conjectured exact degrees, numbered in the order they are displayed:
///
/// * R1: `deg R_0 = 0`, `deg R_1 = 1`
/// * R2: `deg R_n = 2(n-1)` for `n ≥ 2`
/// * R3: `deg(-R_0') = 1`, `deg(-R_1') = 2`
/// * R4: `deg(-R_n') = 2n-1` for `n ≥ 2`
/// * R5: `deg (-1)^m R_0^{(m)} = m-1`, `deg (-1)^m R_1^{(m)} = m` for `m ≥ 2`
/// * R6: `deg (-1)^m R_n^{(m)} = m+2(n-1)` for `m, n ≥ 2`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Conjecture {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Conjecture {
    pub const ALL: [Conjecture; 6] = [Self::R1, Self::R2, Self::R3, Self::R4, Self::R5, Self::R6];

    /// The conjecture that covers `spec`.
    pub fn for_target(spec: &RemainderSpec) -> Option<Self> {
        let small = spec.n <= 1;
        Some(match (spec.m, small) {
            (0, true) => Self::R1,
            (0, false) => Self::R2,
            (1, true) => Self::R3,
            (1, false) => Self::R4,
            (_, true) => Self::R5,
            (_, false) => Self::R6,
        })
    }

    /// Conjectured degree of `(-1)^m R_n^{(m)}`.
    pub fn claimed_degree(spec: &RemainderSpec) -> f64 {
        let (n, m) = (spec.n as f64, spec.m as f64);
        match (spec.n, spec.m) {
            (0, 0) => 0.0,
            (1, 0) => 1.0,
            (_, 0) => 2.0 * (n - 1.0),
            (0, 1) => 1.0,
            (1, 1) => 2.0,
            (_, 1) => 2.0 * n - 1.0,
            (0, _) => m - 1.0,
            (1, _) => m,
            _ => m + 2.0 * (n - 1.0),
        }
    }

    /// Targets tabulated for this conjecture.
    pub fn targets(self) -> Vec<RemainderSpec> {
        let r = RemainderSpec::new;
        match self {
            Self::R1 => vec![r(0, 0), r(1, 0)],
            Self::R2 => (2..=4).map(|n| r(n, 0)).collect(),
            Self::R3 => vec![r(0, 1), r(1, 1)],
            Self::R4 => (2..=4).map(|n| r(n, 1)).collect(),
            Self::R5 => (0..=1).flat_map(|n| (2..=5).map(move |m| r(n, m))).collect(),
            Self::R6 => (2..=3).flat_map(|n| (2..=3).map(move |m| r(n, m))).collect(),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| domain(format!("unknown conjecture {s:?}, expected R1..R6")))
    }
}

/// One row of a conjecture table.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub target: String,
    pub claimed: f64,
    pub lo: f64,
    pub hi: f64,
    pub hi_source: &'static str,
    /// The claim lies inside the empirical bracket.
    pub consistent: bool,
}

impl TableRow {
    pub fn from_report(r: &DegreeReport) -> Self {
        let claimed = Conjecture::claimed_degree(&r.target);
        // A failing kernel level excludes itself; the ratio cap does not.
        let (below_hi, hi_source) = match r.witness {
            Some(Witness::Kernel { level, .. }) if level as f64 == r.hi => (claimed < r.hi, "kernel"),
            _ => (claimed <= r.hi, "ratio"),
        };
        TableRow {
            target: r.target.to_string(),
            claimed,
            lo: r.lo,
            hi: r.hi,
            hi_source,
            consistent: r.lo <= claimed && below_hi,
        }
    }
}

/// Empirical brackets for every target of `conjecture`.
pub fn conjecture_table(conjecture: Conjecture, cfg: &BracketConfig, ctx: &PrecisionContext) -> Result<Vec<TableRow>> {
    conjecture
        .targets()
        .iter()
        .map(|spec| degree_bracket(spec, &default_levels(spec), cfg, ctx).map(|r| TableRow::from_report(&r)))
        .collect()
}

/// Plain-text rendering of a table.
pub fn render_table(conjecture: Conjecture, rows: &[TableRow]) -> String {
    let mut out = format!("{conjecture}\n{:<10} {:>8} {:>6} {:>12} {:>7} {:>10}\n", "target", "claimed", "lo", "hi", "source", "consistent");
    for r in rows {
        out.push_str(&format!(
            "{:<10} {:>8} {:>6} {:>12.6} {:>7} {:>10}\n",
            r.target, r.claimed, r.lo, r.hi, r.hi_source, r.consistent
        ));
    }
    out
}
