use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Lib(#[from] dpgap::Error),

    #[error("{first} and {second} differ by {diff:e} at s = {s} (tolerance {tol:e})")]
    Disagreement {
        first: &'static str,
        second: &'static str,
        s: usize,
        diff: f64,
        tol: f64,
    },

    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Lib(e) if e.is_numerical() => 2,
            CliError::Lib(dpgap::Error::UnsupportedFamily { .. }) => 3,
            CliError::Lib(_) => 1,
            CliError::Disagreement { .. } | CliError::VerifyFailed => 2,
        }
    }

    /// Lattice index the failure refers to, when there is one.
    pub fn step(&self) -> Option<usize> {
        use dpgap::Error::*;
        match self {
            CliError::Disagreement { s, .. } => Some(*s),
            CliError::Lib(e) => match e {
                ResidueViolation { s, .. }
                | EpsilonSingular { s, .. }
                | DegenerateParameterization { s, .. }
                | DPSingular { s, .. }
                | RootNotFound { s }
                | NonFinite { s } => Some(*s),
                PoleHit { index } => Some(*index),
                _ => None,
            },
            _ => None,
        }
    }
}
