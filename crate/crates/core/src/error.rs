//! Crate-wide error type and exit-code mapping for the CLI.

/// Errors produced by model evaluation, quadrature, inference and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameters or configuration (CLI exit code 2).
    #[error("validation: {0}")]
    Validation(String),

    /// An evaluation point lies outside the support of the family (exit code 2).
    #[error("domain: {0}")]
    Domain(String),

    /// Malformed configuration file or CLI arguments (exit code 2).
    #[error("config: {0}")]
    Config(String),

    /// Adaptive quadrature exhausted its panel budget above tolerance (exit code 3).
    #[error(
        "quadrature did not converge: value {value:.6e}, residual error {abs_error:.3e} \
         after {panels} panels"
    )]
    NonConvergence {
        value: f64,
        abs_error: f64,
        panels: usize,
    },

    /// Every likelihood weight vanished; the posterior cannot be normalized (exit code 3).
    #[error("degenerate posterior: all likelihood weights are zero")]
    DegeneratePosterior,

    /// Prior tail mass beyond `theta_max` is too large relative to the evidence (exit code 3).
    #[error(
        "theta_max = {theta_max} is too small: prior tail mass beyond it is {tail_mass:.3e}, \
         which exceeds 1e-12 of the estimated evidence; rerun with a larger theta_max"
    )]
    ThetaMaxTooSmall { theta_max: f64, tail_mass: f64 },

    /// Root bracketing or refinement failed inside an oscillation decomposition (exit code 3).
    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 0 success, 2 validation, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Domain(_) | Error::Config(_) => 2,
            Error::NonConvergence { .. }
            | Error::DegeneratePosterior
            | Error::ThetaMaxTooSmall { .. }
            | Error::RootFinding(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
