use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} and {modulus} are not coprime")]
    NotCoprime { value: u64, modulus: u64 },

    #[error("primality of {0} cannot be decided deterministically (above the Miller-Rabin base-set bound)")]
    PrimalityBoundExceeded(BigUint),

    #[error("factorization incomplete: cofactor {cofactor} left unfactored (found so far: {found:?})")]
    FactorizationIncomplete {
        cofactor: BigUint,
        found: Vec<BigUint>,
    },

    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),

    #[error("invalid code spec: {0}")]
    InvalidSpec(String),

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{count} minors exceed the budget of {budget}")]
    MinorBudgetExceeded { count: u128, budget: u128 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("entry at ({row}, {col}) is not a power of the chosen root of unity")]
    NotInCyclicGroup { row: usize, col: usize },

    #[error("{p} divides {n}: the prime is ramified")]
    Ramified { p: u64, n: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("some maximal minor vanishes in characteristic zero; no reduction is MDS")]
    ZeroMinorPresent,

    #[error("matrix has rank {rank} < {rows}")]
    RankDeficient { rank: usize, rows: usize },

    #[error("code is not MDS")]
    NotMds,

    #[error("{p} is a bad prime for this spec")]
    BadPrime { p: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}
