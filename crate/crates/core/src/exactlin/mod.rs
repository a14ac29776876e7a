//! Exact linear algebra over the rationals and prime fields.

mod field;
mod matrix;
mod subquotient;

pub use field::{FieldKind, FieldSpec, Scalar};
pub use matrix::Matrix;
pub use subquotient::{induced_map, Subquotient};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("{0} is not a supported prime")]
    NotPrime(u32),
    #[error("cannot parse field `{0}`")]
    BadField(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("right-hand side is not in the image")]
    NoSolution,
    #[error("subspace W is not contained in U")]
    InclusionViolation,
    #[error("vector is not in the subspace")]
    NotInSubspace,
    #[error("induced map is not well defined")]
    NotWellDefined,
}
