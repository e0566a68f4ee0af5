use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two multivectors with different metrics were combined.
    #[error("metric mismatch between operands")]
    MetricMismatch,

    /// A grade outside `0..=d` was requested.
    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: i32, dim: usize },

    /// Dimension outside what the operation supports.
    #[error("unsupported dimension {dim} (supported up to {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    /// Operation requires `d >= 1`.
    #[error("operation requires dimension >= 1")]
    DimensionZero,

    /// Zero determinant: no inverse exists.
    #[error("singular multivector (zero determinant)")]
    Singular,

    /// A registered determinant expression left a non-scalar residue beyond
    /// tolerance. Over an exact ring this signals a formula bug.
    #[error("determinant evaluation left a non-scalar residue")]
    InternalNonScalar,

    /// An expression evaluated in determinant mode did not produce a scalar.
    #[error("expression did not evaluate to a scalar")]
    NonScalarResult,

    /// Symbolic expansion of a registered determinant expression has a
    /// nonzero non-scalar component.
    #[error("symbolic expansion has a nonzero non-scalar component")]
    NonScalarSymbolic,

    /// Input is not of scalar-plus-blade form.
    #[error("multivector is not of scalar-plus-blade form")]
    NotScalarBladeForm,

    /// Unknown expression id.
    #[error("unknown expression id `{0}`")]
    UnknownExpression(String),

    /// Division by a non-invertible scalar inside expression evaluation.
    #[error("division by zero scalar in expression")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
