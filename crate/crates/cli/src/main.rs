//! `needlets`: construct Hermite needlet frames, decompose functions, compute
//! norms and run the verification suites.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid parameters or
//! input, 3 resource limits and I/O failures.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hermite_needlets::export::NormKind;
use hermite_needlets::verify::Suite;
use hermite_needlets::{ErrorClass, NeedletError};

use crate::config::{Overrides, RunConfig, BUDGET_ENV};
use crate::spec::CutoffSpec;

/// Malformed user input that the library never saw.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A verification suite ran and at least one property failed.
#[derive(Debug)]
pub struct VerifyFailed(pub usize);

impl std::fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} propert{} failed", self.0, if self.0 == 1 { "y" } else { "ies" })
    }
}

impl std::error::Error for VerifyFailed {}

#[derive(Parser, Debug)]
#[command(name = "needlets", version, about = "Hermite needlet frames on R^d, d = 1, 2")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Run configuration; flags override the JSON file given by `--config`.
#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimension d (1 or 2).
    #[arg(long = "d", alias = "dimension", global = true)]
    dimension: Option<usize>,
    /// Frame parameter δ in (0, 1/37).
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Deepest frame level.
    #[arg(long, global = true)]
    j_max: Option<usize>,
    /// `quadratic` or `dual:type_b:U,V`.
    #[arg(long, global = true)]
    cutoff: Option<CutoffSpec>,
    /// Half width R of the evaluation grid [−R, R]^d.
    #[arg(long, global = true)]
    grid_radius: Option<f64>,
    /// Grid points per unit length.
    #[arg(long, global = true)]
    grid_resolution: Option<usize>,
    /// Largest admissible number of nodes per rule or level.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Directory for multi-file outputs.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gauss–Hermite product rule as CSV.
    Rule {
        /// Points per axis.
        #[arg(long)]
        n: usize,
        /// Output file (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frame manifest (JSON) and one node table per level in the output directory.
    Frame,
    /// Needlet coefficients of a function as CSV.
    Decompose {
        /// `hermite:[[[α…],c],…]` or `bump:WIDTH,C1[,C2]`.
        #[arg(long)]
        function: String,
        /// Projection degree for bump inputs (default 4^{J_max}).
        #[arg(long)]
        degree: Option<usize>,
        /// Largest accepted projection tail indicator for bump inputs.
        #[arg(long, default_value_t = 1e-6)]
        tail_limit: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hermite coefficients synthesized from a coefficient table.
    Reconstruct {
        /// Table written by `decompose` with the same configuration.
        #[arg(long)]
        coefficients: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norm report as CSV.
    Norms {
        /// Function specs; repeat for several functions.
        #[arg(long = "function", required = true)]
        functions: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Integrability p in (0, ∞], `inf` allowed.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Summability q in (0, ∞], `inf` allowed.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// F, B, f_seq, b_seq, A or Lp; repeat or comma-separate for several.
        #[arg(long, value_delimiter = ',', default_value = "F")]
        kind: Vec<NormKind>,
        /// Truncation level of the approximation norm.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1e-6)]
        tail_limit: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Localization profile of one needlet as CSV.
    Decay {
        #[arg(long)]
        level: usize,
        /// Node index (default: the node nearest the origin).
        #[arg(long)]
        node: Option<usize>,
        /// Decay exponent of the weight (1 + 2^j|x − ξ|)^k.
        #[arg(long, default_value_t = 5)]
        k: u32,
        /// Profile the first partial derivative instead.
        #[arg(long)]
        derivative: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norms of translates of a bump (one dimension).
    ShiftStudy {
        #[arg(long, value_delimiter = ',', default_value = "0,2,4,8")]
        shifts: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Levels of the Hermite-space norms.
        #[arg(long, default_value_t = 8)]
        levels: usize,
        /// Projection degree.
        #[arg(long, default_value_t = 6144)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property checks; one PASS/FAIL line each.
    Verify {
        /// quadrature, cutoff, frame, kernel, spaces or all.
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Tabulate a cutoff as CSV.
    Cutoff {
        /// quadratic, type_a:V, type_b:U,V or dual:type_b:U,V.
        #[arg(long, default_value = "quadratic")]
        kind: String,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 5.0)]
        to: f64,
        #[arg(long, default_value_t = 501)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerifyFailed>().is_some() {
        return 1;
    }
    if let Some(e) = err.downcast_ref::<NeedletError>() {
        return match e.class() {
            ErrorClass::Resource => 3,
            ErrorClass::Parameter | ErrorClass::Numeric => 2,
        };
    }
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    3
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = cli.global;
    let env_budget = std::env::var(BUDGET_ENV).ok();
    let config = RunConfig::load(
        g.config.as_deref(),
        env_budget.as_deref(),
        Overrides {
            dimension: g.dimension,
            delta: g.delta,
            j_max: g.j_max,
            cutoff: g.cutoff,
            grid_radius: g.grid_radius,
            grid_resolution: g.grid_resolution,
            node_budget: g.node_budget,
            output_dir: g.output_dir,
        },
    )?;
    commands::dispatch(cli.command, &config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
