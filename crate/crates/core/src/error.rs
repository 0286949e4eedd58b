//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: body/field has dimension {expected}, input has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported body kind for this operation: {0}")]
    UnsupportedKind(&'static str),

    #[error("cone condition unsatisfiable: axis {axis} intercept is zero (empty interior)")]
    ConeConditionUnsatisfiable { axis: usize },

    #[error("cone condition not satisfied by any k <= {cap}")]
    ConeCapExceeded { cap: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not differentiable here: point lies on the non-smooth locus of the set")]
    NotDifferentiableHere,

    #[error("untrusted derivative: point is outside the field's declared smooth region")]
    UntrustedDerivative,

    #[error("not a smooth body: operation requires q > 1 (smooth support function)")]
    NotSmoothBody,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("grid too coarse: step {step} exceeds smoothing/2 = {limit}")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("grid does not cover the set with margin {required} (missing on {axis_note})")]
    GridMarginTooSmall { required: f64, axis_note: String },

    #[error("empty sample list")]
    EmptySamples,

    #[error("numeric failure in {op}: produced {value}")]
    NumericFailure { op: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
