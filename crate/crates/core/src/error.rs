use thiserror::Error;

use crate::algebra::ValidationReport;

/// Errors produced by the library.
///
/// The variants split into two families: mathematical failures (an inverse
/// does not exist, a quasideterminant is undefined, ...) and input failures
/// (mismatched shapes, malformed files). [`Error::is_math_failure`] tells them
/// apart; the command-line front-end maps them to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("unknown builtin algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("structure constants do not define a unital associative algebra: {0}")]
    InvalidAlgebra(ValidationReport),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),

    #[error("element is not invertible")]
    NotInvertible,
    #[error("singular: {0}")]
    Singular(String),
    #[error("operator is outside the span of the maps x -> e_k x e_l")]
    NotRepresentable,
    #[error("not defined: {0}")]
    NotDefined(String),
    #[error("matrix is nonsingular but no pivot sequence with invertible pivots exists")]
    PivotSearchFailed,
    #[error("{0}")]
    FormsDisagree(String),
}

impl Error {
    /// True for failures that are statements about the mathematics (singular,
    /// undefined, not representable) rather than about malformed input.
    pub fn is_math_failure(&self) -> bool {
        matches!(
            self,
            Error::NotInvertible
                | Error::Singular(_)
                | Error::NotRepresentable
                | Error::NotDefined(_)
                | Error::PivotSearchFailed
                | Error::FormsDisagree(_)
                | Error::InvalidAlgebra(_)
        )
    }

    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::InvalidIndex(_) => "InvalidIndex",
            Error::UnknownAlgebra(_) => "UnknownAlgebra",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::NotInvertible => "NotInvertible",
            Error::Singular(_) => "Singular",
            Error::NotRepresentable => "NotRepresentable",
            Error::NotDefined(_) => "NotDefined",
            Error::PivotSearchFailed => "PivotSearchFailed",
            Error::FormsDisagree(_) => "FormsDisagree",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
