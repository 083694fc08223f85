//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable-count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),

    #[error("too many variables: {0} (limit {1})")]
    TooManyVars(usize, usize),

    #[error("variable index {0} out of range for {1} variables")]
    VarOutOfRange(usize, usize),

    /// Antidifferentiation hit a `t^-1` term, which would leave the Laurent ring.
    #[error("logarithmic term: exponent -1 in variable {var} has nonzero coefficient")]
    LogTerm { var: usize },

    /// Substituting 0 into a negative power.
    #[error("pole: substituting 0 into a negative power of variable {var}")]
    Pole { var: usize },

    /// Divided difference requires purely even exponents in the active variable.
    #[error("odd exponent {exp} in variable {var} where only even exponents are allowed")]
    OddExponent { var: usize, exp: i32 },

    #[error("slot map is not injective")]
    NonInjective,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A rational-function sum failed exact division, i.e. is not a Laurent polynomial.
    #[error("non-Laurent result: division by {0} leaves a remainder")]
    NonLaurent(String),

    #[error("missing dependency: F({g},{n}) not yet computed")]
    MissingDependency { g: u32, n: u32 },

    #[error("unstable type: (g,n)=({g},{n}) requires 2g-2+n > 0")]
    Unstable { g: u32, n: u32 },

    #[error("invalid perimeter vector: {0}")]
    InvalidPerimeter(String),

    /// Permutation-equivalent monomials decoded to different intersection numbers.
    #[error("inconsistent orbit: {0}")]
    InconsistentOrbit(String),

    #[error("enumeration guard exceeded: type ({g},{n}) needs up to {needed} edges, guard is {guard}")]
    GuardExceeded { g: u32, n: u32, needed: u32, guard: u32 },

    /// A computed polynomial failed its structural invariant suite.
    #[error("invariant violation for F({g},{n}): {detail}")]
    InvariantViolation { g: u32, n: u32, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
