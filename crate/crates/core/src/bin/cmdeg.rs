//! `cmdeg`: evaluate remainders and kernels, bracket completely monotonic
//! degrees and run the proposition check suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cmdeg::kernels::{KernelFamily, KernelSpec, Representation};
use cmdeg::lab::{
    conjecture_table, default_levels, degree_bracket, derivative_degree_bracket, log_grid, render_table,
    BracketConfig, Conjecture, DegreeReport, Proposition, Status, VerifyConfig, DEFAULT_GRID_POINTS,
    DEFAULT_T_MAX, DEFAULT_T_MIN,
};
use cmdeg::remainders::{EvalPath, RemainderSpec};
use cmdeg::PrecisionContext;

#[derive(Parser)]
#[command(name = "cmdeg", version, about = "Completely monotonic degrees of Stirling remainders")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "CMDEG_DIGITS")]
    digits: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate R_n(x) or (-1)^m R_n^(m)(x).
    Eval {
        #[arg(long = "fn", value_enum, default_value = "r")]
        function: Function,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value = "auto")]
        path: PathArg,
    },
    /// Evaluate a kernel at t.
    Kernel {
        #[arg(long)]
        family: String,
        /// Index n of binet-f / binet-g.
        #[arg(long)]
        n: Option<u32>,
        /// Index m of laguerre-f.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "auto")]
        repr: ReprArg,
    },
    /// Bracket the degree of R_n or of (-1)^m R_n^(m).
    Degree {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Comma-separated levels; every admissible integer level by default.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Significant digits in CSV output.
        #[arg(long, default_value_t = 20)]
        output_digits: usize,
    },
    /// Run a proposition check suite.
    Verify {
        /// 1, 2, 3, 4, m80 or all.
        #[arg(long, default_value = "all")]
        prop: String,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the check list.
        #[arg(long)]
        json: bool,
    },
    /// Empirical brackets for every target of a conjecture.
    Table {
        #[arg(long)]
        conjecture: String,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "Rderiv", alias = "rderiv")]
    Rderiv,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Auto,
    Closed,
    Laplace,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    Auto,
    Series,
    Laguerre,
    Integral,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    #[value(name = "Rn", alias = "rn")]
    Rn,
    #[value(name = "Rn-deriv", alias = "rn-deriv")]
    RnDeriv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

fn context(digits: Option<u32>) -> Result<PrecisionContext> {
    Ok(match digits {
        Some(d) => PrecisionContext::new(d)?,
        None => PrecisionContext::default(),
    })
}

fn bracket_config(grid_points: usize, t_max: f64) -> Result<BracketConfig> {
    if grid_points < 2 || t_max.is_nan() || t_max <= DEFAULT_T_MIN {
        bail!("need at least 2 grid points and t-max > {DEFAULT_T_MIN}");
    }
    Ok(BracketConfig {
        grid: log_grid(DEFAULT_T_MIN, t_max, grid_points),
        ..BracketConfig::default()
    })
}

fn print_value(v: &cmdeg::HPReal, ctx: &PrecisionContext) {
    println!("value     {}", v.to_string_digits(ctx.working_digits() as usize));
    println!("err_bound {:.3e}", v.err_bound());
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = context(cli.digits)?;
    match cli.command {
        Command::Eval { function, n, m, x, path } => {
            let m = match function {
                Function::R => 0,
                Function::Rderiv => m.max(1),
            };
            let path = match path {
                PathArg::Auto => EvalPath::AutoSelect,
                PathArg::Closed => EvalPath::ClosedForm,
                PathArg::Laplace => EvalPath::LaplaceIntegral,
            };
            let x = ctx.parse_real(&x)?;
            let v = RemainderSpec::new(n, m).with_path(path).evaluate(&x, &ctx)?;
            print_value(&v, &ctx);
        }
        Command::Kernel { family, n, m, deriv, t, repr } => {
            let family: KernelFamily = family.parse()?;
            let index = match family {
                KernelFamily::BinetF | KernelFamily::BinetG => n.context("--n is required for this family")?,
                KernelFamily::LaguerreF => m.context("--m is required for laguerre-f")?,
                KernelFamily::SKernel => 0,
            };
            let repr = match repr {
                ReprArg::Auto => Representation::AutoSelect,
                ReprArg::Series => Representation::SmallTSeries,
                ReprArg::Laguerre => Representation::LaguerreSum,
                ReprArg::Integral => Representation::IntegralRep,
                ReprArg::Closed => Representation::ClosedForm,
            };
            let spec = KernelSpec::new(family, index, deriv)?.with_representation(repr);
            let v = spec.evaluate(&ctx.parse_real(&t)?, &ctx)?;
            print_value(&v, &ctx);
        }
        Command::Degree {
            target,
            n,
            m,
            levels,
            grid_points,
            t_max,
            format,
            output_digits,
        } => {
            let cfg = bracket_config(grid_points, t_max)?;
            let report = degree_report(target, n, m, levels, &cfg, &ctx)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json())?),
                Format::Csv => print!("{}", report.to_csv(output_digits)),
            }
        }
        Command::Verify { prop, report, json } => {
            let prop: Proposition = prop.parse()?;
            let r = cmdeg::lab::verify_proposition(prop, &VerifyConfig::default(), &ctx);
            let body = serde_json::to_string_pretty(&r.to_json())?;
            if let Some(path) = report {
                fs::write(&path, format!("{body}\n")).with_context(|| format!("writing {}", path.display()))?;
            }
            if json {
                println!("{body}");
            } else {
                for c in &r.checks {
                    let tag = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Inconclusive => "INCONCLUSIVE",
                    };
                    let note = c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
                    println!("{tag:<12} {} [{}]{note}", c.name, c.min_value);
                }
                let k = r.counts();
                println!(
                    "{}: {} passed, {} failed, {} inconclusive in {:.1}s",
                    r.proposition, k.pass, k.fail, k.inconclusive, r.elapsed_seconds
                );
            }
            if !r.no_failures() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Table {
            conjecture,
            grid_points,
            format,
        } => {
            let c: Conjecture = conjecture.parse()?;
            let cfg = bracket_config(grid_points, DEFAULT_T_MAX)?;
            let rows = conjecture_table(c, &cfg, &ctx)?;
            match format {
                TableFormat::Text => print!("{}", render_table(c, &rows)),
                TableFormat::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn degree_report(
    target: Target,
    n: u32,
    m: u32,
    levels: Option<Vec<f64>>,
    cfg: &BracketConfig,
    ctx: &PrecisionContext,
) -> Result<DegreeReport> {
    let spec = match target {
        Target::Rn => RemainderSpec::new(n, 0),
        Target::RnDeriv => RemainderSpec::new(n, m.max(1)),
    };
    let derivative_rule = matches!(target, Target::RnDeriv) && ((n == 0 && spec.m >= 3) || n == 1);
    Ok(match levels {
        None if derivative_rule => derivative_degree_bracket(n, spec.m, cfg, ctx)?,
        None => degree_bracket(&spec, &default_levels(&spec), cfg, ctx)?,
        Some(mut levels) => {
            levels.sort_by(f64::total_cmp);
            degree_bracket(&spec, &levels, cfg, ctx)?
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
