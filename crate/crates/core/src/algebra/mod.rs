//! Exact scalar arithmetic and dense linear algebra.

mod matrix;
mod scalar;

pub use matrix::{Matrix, RowEchelon};
pub use scalar::{is_prime, Field, Scalar, DEFAULT_PRIME};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: {left} and {right}")]
    MixedFields { left: Field, right: Field },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Dot product of two equal-length vectors.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    let field = a.first().or(b.first()).map_or(Field::Rational, Scalar::field);
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Rank of a list of vectors of common length.
pub fn rank_of(field: Field, dim: usize, vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(field, dim, vectors.to_vec())
        .expect("vectors share the ambient dimension")
        .rank()
}
