use crate::fuchsian::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("validation failed: {0}")]
    Validation(ValidationReport),

    #[error("exponent not in spectrum at point {}: residue spectrum {spectrum:?} vs marked pair {marked:?}", .index + 1)]
    SpectrumMismatch {
        index: usize,
        spectrum: (String, String),
        marked: (String, String),
    },

    #[error("safety radius {radius:e} underflows (poles too close)")]
    RadiusUnderflow { radius: f64 },

    #[error("basepoint {basepoint} cannot reach every pole along a straight tail")]
    BasepointObstructed { basepoint: String },

    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },

    #[error("path passes within {distance:e} of pole {pole} (safety radius {radius:e})")]
    PoleProximity {
        pole: usize,
        distance: f64,
        radius: f64,
    },

    #[error("pole collision between t{} and t{} at s* = {s_star}", .i + 1, .j + 1)]
    PoleCollision { i: usize, j: usize, s_star: f64 },

    #[error("Liouville check failed: |det Y − exp∫tr A| = {deviation:e}")]
    DeterminantDrift { deviation: f64 },

    #[error("monodromy check `{check}` failed: residual {residual:e} > tolerance {tolerance:e}")]
    MonodromyCheck {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("subbundle is not invariant: wedge residual {residual:e}")]
    NotInvariant { residual: f64 },

    #[error("eigenline at point {} is numerically indeterminate (near-scalar residue)", .index + 1)]
    IndeterminateEigenline { index: usize },

    #[error("degenerate gauge: {0}")]
    DegenerateGauge(String),

    #[error("retry budget of {attempts} exhausted: {witness}")]
    RetryBudgetExhausted { attempts: usize, witness: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Field { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 1 for input/validation problems, 2 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::Validation(_)
            | Error::SpectrumMismatch { .. }
            | Error::Parse { .. }
            | Error::Field { .. }
            | Error::NotInvariant { .. }
            | Error::IndeterminateEigenline { .. }
            | Error::DegenerateGauge(_)
            | Error::Io(_)
            | Error::Csv(_) => 1,
            Error::RadiusUnderflow { .. }
            | Error::BasepointObstructed { .. }
            | Error::StepUnderflow { .. }
            | Error::PoleProximity { .. }
            | Error::PoleCollision { .. }
            | Error::DeterminantDrift { .. }
            | Error::MonodromyCheck { .. }
            | Error::RetryBudgetExhausted { .. } => 2,
        }
    }
}
