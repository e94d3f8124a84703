use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("radial grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("inward integration diverged at r = {r} a.u.")]
    DivergedIntegration { r: f64 },

    #[error(
        "unsupported polarization: theta_R - theta_B = {difference} rad (must be pi/2 mod pi)"
    )]
    UnsupportedPolarization { difference: f64 },

    #[error("p-wave resonance singularity at k = {k} a.u. (|cos delta_p| = {cos_delta})")]
    ResonanceSingularity { k: f64, cos_delta: f64 },

    #[error("quadrature not converged: {0}")]
    QuadratureNotConverged(String),

    #[error("basis of {size} states exceeds the truncation limit {limit}")]
    BasisTooLarge { size: usize, limit: usize },

    #[error("numerical error: {0}")]
    NumericalError(String),

    #[error("no potential minimum found: {0}")]
    NoMinimumFound(String),

    #[error("negative curvature {curvature} at z = {z_nm} nm")]
    NegativeCurvature { z_nm: f64, curvature: f64 },

    #[error("motional cutoff too small: F changed from {before} to {after} when adding 5 levels")]
    CutoffTooSmall { before: f64, after: f64 },

    #[error("adiabatic elimination invalid: |Delta| = {delta} below {threshold}")]
    ValidityWarning { delta: f64, threshold: f64 },

    #[error("integrator tolerance not met: {0}")]
    IntegratorTolerance(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("stabilizer phase {theta} rad unreachable: {reason}")]
    PhaseUnreachable { theta: f64, reason: String },

    #[error("invalid configuration `{key}`: {message}")]
    ConfigInvalid { key: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad inputs rather than numerics or I/O.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::ConfigInvalid { .. }
                | Error::Parse { .. }
                | Error::InvalidQuantumNumbers(_)
                | Error::UnsupportedPolarization { .. }
                | Error::DimensionMismatch { .. }
                | Error::BasisTooLarge { .. }
                | Error::PhaseUnreachable { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
