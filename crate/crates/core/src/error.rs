use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficients ({0}) do not define a unit imaginary quaternion")]
    NotUnitImaginary(String),
    #[error("not representable over the Gaussian rationals: {0}; use the float backend")]
    FieldClosureError(String),
    #[error("endomorphism is not scalar (deviation {0})")]
    NotScalar(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("substitution map has a singular linear part")]
    SingularLinearPart,
    #[error("Groebner pair budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("map does not preserve the relation ideal: {0}")]
    DoesNotPreserveIdeal(String),
    #[error("action on the cotangent space is not scalar")]
    NotScalarDifferential,
    #[error("lambda = {0} is outside 0 < |lambda| < 1")]
    LambdaOutOfRange(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("plane {0} is not invariant under the quaternion action")]
    NotQuaternionInvariant(usize),
    #[error("planes {0} and {1} coincide")]
    DuplicatePlane(usize, usize),
    #[error("operation needs exact arithmetic: {0}")]
    UnsupportedBackend(String),
    #[error("kernel component is not in the kernel at this truncation: {0}")]
    InhomogeneousKernel(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid job field `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { field: field.into(), message: message.into() }
    }

    /// Stable identifier used in JSON diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotUnitImaginary(_) => "NotUnitImaginary",
            Error::FieldClosureError(_) => "FieldClosureError",
            Error::NotScalar(_) => "NotScalar",
            Error::RingMismatch => "RingMismatch",
            Error::SingularLinearPart => "SingularLinearPart",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::DoesNotPreserveIdeal(_) => "DoesNotPreserveIdeal",
            Error::NotScalarDifferential => "NotScalarDifferential",
            Error::LambdaOutOfRange(_) => "LambdaOutOfRange",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotQuaternionInvariant(_) => "NotQuaternionInvariant",
            Error::DuplicatePlane(..) => "DuplicatePlane",
            Error::UnsupportedBackend(_) => "UnsupportedBackend",
            Error::InhomogeneousKernel(_) => "InhomogeneousKernel",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
        }
    }
}
