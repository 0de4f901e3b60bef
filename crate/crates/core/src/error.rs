use thiserror::Error;

/// Errors raised by the exact-arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be a positive integer")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{d} does not divide {n}")]
    NotADivisor { d: u64, n: u64 },
    #[error("{mu} is not an exact divisor of {n}")]
    NotExactDivisor { n: u64, mu: u64 },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u64, right: u64 },
    #[error("denominator of {entry} exceeds the bound {bound}")]
    DenominatorTooLarge { entry: &'static str, bound: u64 },
    #[error("determinant is {0}, expected 1")]
    DeterminantNotOne(String),
    #[error("radicands {0} and {1} cannot be combined in a single entry")]
    MixedRadicands(u64, u64),
    #[error("matrix is not an element of the group at level {0}")]
    NotMember(u64),
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),
    #[error("{m} does not divide the exponent {lambda} of the unit group")]
    NotTorsionExponent { m: u64, lambda: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid residue subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("level {level} exceeds the enumeration bound {bound}")]
    BoundExceeded { level: u64, bound: u64 },
    #[error("closed form is not integral: {0}")]
    NotIntegral(String),
    #[error("matrix does not preserve the lattice")]
    NotAnAutomorphism,
}

pub type Result<T> = std::result::Result<T, Error>;
