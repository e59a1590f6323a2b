//! Degree brackets, proposition check suites and report plumbing.

mod degree;
mod scan;
mod search;
mod tables;
mod verify;

use std::fmt;

use serde::Serialize;

use crate::hpreal::format_float;

pub use degree::{
    default_levels, degree_bracket, derivative_degree_bracket, f_half_factorial_scan, fprime_gap_scan,
    level_kernel, ratio_for, ratio_infimum, ratio_infimum_for, BracketConfig, DegreeJson, DegreeReport,
    RatioMinimum, Witness, WitnessJson,
};
pub use scan::{
    default_grid, kernel_sign_scan, log_grid, scan_fn, scan_shape, SignScan, DEFAULT_GRID_POINTS, DEFAULT_T_MAX,
    DEFAULT_T_MIN,
};
pub use search::{s_negativity_search, SearchOutcome, DEFAULT_TERM_BUDGET};
pub use tables::{conjecture_table, render_table, Conjecture, TableRow};
pub use verify::{stray_m80_check, stray_point, verify_proposition, Proposition, VerificationReport, VerifyConfig};

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The engine could not decide; never counted as a failure.
    Inconclusive,
}

/// One named check with the statistic it was decided on.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub grid: String,
    /// Smallest margin for sign checks, largest discrepancy for identities.
    pub min_value: String,
    pub tolerance: f64,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn with_status(name: String, grid: String, min_value: String, tolerance: f64, status: Status) -> Self {
        Check {
            name,
            grid,
            min_value,
            tolerance,
            pass: status == Status::Pass,
            status,
            note: None,
        }
    }

    /// A check decided by a plain comparison.
    pub fn measured(name: String, grid: String, min_value: String, tolerance: f64, pass: bool) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Self::with_status(name, grid, min_value, tolerance, status)
    }

    /// `discrepancy ≤ tolerance`.
    pub fn agreement(name: String, grid: String, discrepancy: f64, tolerance: f64) -> Self {
        Self::measured(name, grid, format!("{discrepancy:.3e}"), tolerance, discrepancy <= tolerance)
    }

    /// Positivity on the grid and beyond it.
    pub fn positivity(name: String, grid: String, scan: &SignScan) -> Self {
        let status = if scan.passed() {
            Status::Pass
        } else if scan.witness.is_some() {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        let mut c = Self::with_status(name, grid, format_float(scan.min_value.value(), 12), 0.0, status);
        if let Some((t, _)) = &scan.witness {
            c.note = Some(format!("negative at t = {t}"));
        } else if scan.unresolved > 0 {
            c.note = Some(format!("{} samples with uncertified sign", scan.unresolved));
        } else if status == Status::Inconclusive {
            c.note = Some("no tail certificate".to_string());
        }
        c
    }

    /// Positivity on the grid points only.
    pub fn grid_positivity(name: String, grid: String, scan: &SignScan) -> Self {
        let mut scan = scan.clone();
        scan.tail = Some(std::cmp::Ordering::Greater);
        Self::positivity(name, grid, &scan)
    }

    /// A certified negative value is expected somewhere on the grid.
    pub fn negativity(name: String, grid: String, scan: &SignScan) -> Self {
        let status = if scan.witness.is_some() { Status::Pass } else { Status::Fail };
        let mut c = Self::with_status(name, grid, format_float(scan.min_value.value(), 12), 0.0, status);
        if let Some((t, _)) = &scan.witness {
            c.note = Some(format!("first certified negative value at t = {t}"));
        }
        c
    }

    pub fn inconclusive(name: String, grid: String, tolerance: f64, note: impl Into<String>) -> Self {
        let mut c = Self::with_status(name, grid, String::new(), tolerance, Status::Inconclusive);
        c.note = Some(note.into());
        c
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Compact description of a `t` grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSummary {
    pub points: usize,
    pub t_min: f64,
    pub t_max: f64,
}

impl GridSummary {
    pub fn of(grid: &[f64]) -> Self {
        GridSummary {
            points: grid.len(),
            t_min: grid.iter().cloned().fold(f64::INFINITY, f64::min),
            t_max: grid.iter().cloned().fold(0.0, f64::max),
        }
    }
}

impl fmt::Display for GridSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} points on [{}, {}]", self.points, self.t_min, self.t_max)
    }
}
