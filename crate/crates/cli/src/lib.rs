//! Library side of the `shortcalc` binary: problem files, command dispatch
//! and report rendering.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod problem;

use std::ffi::OsString;

use clap::Parser;
use shortcalc::Tolerance64;

pub use args::{Cli, Command};
pub use error::CliError;
pub use output::{Outcome, Provenance, Value};
pub use problem::{parse_problem, InputDigest, ProblemFile};

pub const TOL_ENV: &str = "SHORTCALC_TOL";

/// Precedence: `--tol`, then the problem file, then `SHORTCALC_TOL`, then the default.
pub fn resolve_tolerance(
    flag: Option<f64>,
    file: Option<Tolerance64>,
    env: Option<&str>,
) -> Result<Tolerance64, CliError> {
    let scaled = |x: f64, origin: &str| {
        Tolerance64::scaled_to(x).ok_or_else(|| CliError::Usage(format!("{origin}: tolerance {x} must be finite and non-negative")))
    };
    if let Some(x) = flag {
        return scaled(x, "--tol");
    }
    if let Some(t) = file {
        return Ok(t);
    }
    match env {
        Some(s) => {
            let x = s
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{TOL_ENV}: `{s}` is not a number")))?;
            scaled(x, TOL_ENV)
        }
        None => Ok(Tolerance64::default()),
    }
}

/// Parses, runs and renders one command. Returns the outcome, its
/// provenance and the exit status (0 or 1); input and usage errors come back
/// as `Err` and map to status 2.
pub fn execute(cmd: &Command) -> Result<(Outcome, Provenance, i32), CliError> {
    let common = cmd.common();
    if common.files.is_empty() && !matches!(cmd, Command::Verify { .. }) {
        return Err(CliError::Usage(format!("`{}` needs at least one problem file", cmd.name())));
    }
    let (problem, inputs) = problem::load(&common.files, common.csv)?;
    let env = std::env::var(TOL_ENV).ok();
    let tolerance = resolve_tolerance(common.tol, problem.tolerance, env.as_deref())?;
    let seed = common.seed.or(problem.seed).unwrap_or(0);
    let outcome = match commands::run_command(cmd, &problem, &tolerance, seed) {
        Ok(o) => o,
        Err(e) if e.is_assertion() => commands::failed(cmd, &e),
        Err(e) => return Err(e),
    };
    let status = if outcome.passed() { 0 } else { 1 };
    let prov = Provenance {
        inputs,
        tolerance,
        seed,
    };
    Ok((outcome, prov, status))
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok((outcome, prov, status)) => {
            if let Some(path) = &cli.command.common().json {
                if let Err(e) = std::fs::write(path, output::render_json(&outcome, &prov)) {
                    eprintln!("shortcalc: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            print!("{}", output::render_text(&outcome, &prov));
            status
        }
        Err(e) => {
            eprintln!("shortcalc: {e}");
            e.exit_code()
        }
    }
}
