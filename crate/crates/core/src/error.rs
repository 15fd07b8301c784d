use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not square")]
    NonSquareGram,

    #[error("gram matrix is not symmetric at entry ({0}, {1})")]
    NonSymmetricGram(usize, usize),

    #[error("lattice has rank 0")]
    EmptyLattice,

    #[error("canonical class must be integral")]
    NonIntegralCanonical,

    #[error("signature {0} violates Hodge index")]
    HodgeIndex(crate::lattice::Signature),

    #[error("K² + c₂ = {0} is not divisible by 12 (Noether)")]
    Noether(i64),

    #[error("polarization square H·H = {0} is not positive")]
    NonPositivePolarization(Rational),

    #[error("rank constraint violated: {0}")]
    Rank(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
