use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use shortcalc::orders::Relation;

const EXIT_HELP: &str = "\
Exit status:
  0  every check in the report passed (a false order verdict is still a pass)
  1  a mathematical check or hypothesis failed
  2  malformed input, unknown identifier, or bad usage

Environment:
  SHORTCALC_TOL  base tolerance used when neither --tol nor the problem file sets one";

#[derive(Debug, Parser)]
#[command(
    name = "shortcalc",
    version,
    about = "Shorted operators, compatibility and matrix orders on small complex matrices",
    after_help = EXIT_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem files: JSON, or headerless CSV holding one real matrix named after the file
    pub files: Vec<PathBuf>,
    /// Read every problem file as CSV
    #[arg(long)]
    pub csv: bool,
    /// Base tolerance; overrides SHORTCALC_TOL and the problem file
    #[arg(long, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Seed for sampled checks; overrides the problem file
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    /// Write the machine-readable report here
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shorted operator W/S and compression W_S, with the characterisation checks
    Short {
        #[arg(long = "W", value_name = "ID", default_value = "W")]
        w: String,
        #[arg(long = "S", value_name = "ID", default_value = "S")]
        s: String,
        /// Sampled members and projections per check
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compatibility certificate for a weight and a subspace
    Compat {
        #[arg(long = "W", value_name = "ID", default_value = "W")]
        w: String,
        #[arg(long = "S", value_name = "ID", default_value = "S")]
        s: String,
        #[command(flatten)]
        common: Common,
    },
    /// Order verdict A <= B with witnesses
    Order {
        #[arg(long, value_name = "RELATION")]
        rel: Relation,
        #[arg(long = "A", value_name = "ID", default_value = "A")]
        a: String,
        #[arg(long = "B", value_name = "ID", default_value = "B")]
        b: String,
        /// Weight, used by the weighted relations
        #[arg(long = "W", value_name = "ID", default_value = "W")]
        w: String,
        /// Right-hand side for the joint least-squares check (weighted relations)
        #[arg(long = "C", value_name = "ID")]
        c: Option<String>,
        #[arg(long, value_name = "REAL", default_value_t = 2.0)]
        p: f64,
        #[command(flatten)]
        common: Common,
    },
    /// W-inverse of A on B (B defaults to the identity when absent)
    Winverse {
        #[arg(long = "A", value_name = "ID", default_value = "A")]
        a: String,
        #[arg(long = "W", value_name = "ID", default_value = "W")]
        w: String,
        #[arg(long = "B", value_name = "ID")]
        b: Option<String>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize (AXB - I)*W(AXB - I) and check the Schatten p-norm minimum
    Minimize {
        #[arg(long = "A", value_name = "ID", default_value = "A")]
        a: String,
        #[arg(long = "B", value_name = "ID", default_value = "B")]
        b: String,
        #[arg(long = "W", value_name = "ID", default_value = "W")]
        w: String,
        #[arg(long, value_name = "REAL", default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized verification suites
    Verify {
        /// Suite name, or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Short { .. } => "short",
            Command::Compat { .. } => "compat",
            Command::Order { .. } => "order",
            Command::Winverse { .. } => "winverse",
            Command::Minimize { .. } => "minimize",
            Command::Verify { .. } => "verify",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Short { common, .. }
            | Command::Compat { common, .. }
            | Command::Order { common, .. }
            | Command::Winverse { common, .. }
            | Command::Minimize { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}
