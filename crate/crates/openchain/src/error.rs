use num_complex::Complex64;
use thiserror::Error;

/// Errors shared by all engine modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A requested matrix or tensor dimension exceeds the configured cap.
    #[error("size error: requested dimension {requested} exceeds cap {cap}")]
    Size { requested: usize, cap: usize },

    /// Malformed or inconsistent input (bad leg index, wrong vector length, ...).
    #[error("input error: {0}")]
    Input(String),

    /// Matrix is singular or too ill-conditioned to invert reliably.
    #[error("singularity error: condition estimate {cond:.3e} exceeds cap {cap:.3e}")]
    Singular { cond: f64, cap: f64 },

    /// Iterative eigenvalue extraction failed to converge.
    #[error("numerical error: {0}")]
    NonConvergence(String),

    /// An evaluation point landed inside the guard band of a kernel pole.
    #[error("pole error in {kernel}: |{factor}| = {magnitude:.3e} below guard {guard:.3e}")]
    Pole {
        kernel: &'static str,
        factor: &'static str,
        magnitude: f64,
        guard: f64,
    },

    /// The boundary pair violates the simultaneous-triangularizability constraint.
    #[error("not triangularizable: constraint value {value} (|{value_abs:.3e}| above tolerance)")]
    NotTriangularizable { value: Complex64, value_abs: f64 },

    /// No common eigenvector could be identified to tolerance.
    #[error("numerically defective boundary pair: {0}")]
    Defective(String),

    /// Two independent assemblies of the same operator disagree.
    #[error("form mismatch: {context} differ by relative residual {residual:.3e} (cap {cap:.3e})")]
    FormMismatch {
        context: &'static str,
        residual: f64,
        cap: f64,
    },

    /// A Bethe-vector sum collapsed to numerical zero.
    #[error("zero-vector error: assembled vector norm {norm:.3e} below scale {scale:.3e}")]
    ZeroVector { norm: f64, scale: f64 },

    /// Bad run configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
