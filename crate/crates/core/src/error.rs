use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound 2^31")]
    ModulusTooLarge(u64),
    #[error("operation requires an odd prime, got p = 2")]
    CharacteristicTwo,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("x^2 + cx + 1 has a double root (c = {0} = ±2)")]
    DegenerateRoots(u64),
    #[error("{0} is not a quadratic non-residue mod {1}")]
    NotNonResidue(u64, u64),
    #[error("{0} is not a primitive root mod {1}")]
    NotPrimitiveRoot(u64, u64),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("closed form not applicable: {0}")]
    FormulaInapplicable(String),
    #[error("extension component did not cancel: {0}")]
    ExtensionLeak(String),
    #[error("invalid usage: {0}")]
    Usage(String),
}
