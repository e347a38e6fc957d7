//! Experiment harness around `potlab-core`: reproducible instance
//! generation, JSON/CSV report emission, and the experiment commands
//! behind the `potlab` binary.

pub mod config;
pub mod experiments;
pub mod instance;
pub mod io;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Space(#[from] potlab_core::SpaceError),
    #[error(transparent)]
    Kernel(#[from] potlab_core::KernelError),
    #[error(transparent)]
    Nonlin(#[from] potlab_core::NonlinError),
    #[error(transparent)]
    Principle(#[from] potlab_core::PrincipleError),
    #[error(transparent)]
    Solver(#[from] potlab_core::SolverError),
    #[error(transparent)]
    Bound(#[from] potlab_core::BoundError),
}

/// Stable process exit contract: 0 all checks pass, 2 a bound or lemma
/// inequality was breached, 3 a kernel principle was refuted, 4 the
/// configuration was unusable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    BoundViolation,
    PrincipleViolation,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::BoundViolation => 2,
            Outcome::PrincipleViolation => 3,
        }
    }
}

pub const CONFIG_ERROR_EXIT: u8 = 4;
