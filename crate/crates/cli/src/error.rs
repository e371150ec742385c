use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: field `{field}`: {message}")]
    Dimension {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Math(#[from] shortcalc::Error),
}

impl CliError {
    /// 1 for a failed mathematical assertion, 2 for bad input or usage.
    pub fn exit_code(&self) -> i32 {
        if self.is_assertion() {
            1
        } else {
            2
        }
    }

    /// Errors that describe the mathematics of a well-formed input rather
    /// than a malformed one.
    pub fn is_assertion(&self) -> bool {
        use shortcalc::Error as E;
        matches!(
            self,
            CliError::Math(
                E::NotComplementary { .. } | E::NotCompatible | E::Infeasible(_) | E::HypothesisViolated(_)
            )
        )
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
