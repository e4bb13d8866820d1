use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("group order would exceed the element guard ({guard})")]
    GuardExceeded { guard: usize },
    #[error("oracle bound exceeded: |G| = {order} > {bound}")]
    OracleBoundExceeded { order: usize, bound: usize },
    #[error("elements belong to different ambient groups")]
    AmbientMismatch,
    #[error("operands belong to different group algebras")]
    AlgebraMismatch,
    #[error("element is not in the group")]
    NotInGroup,
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element is not a unit (augmentation 0)")]
    NotAUnit,
    #[error("unit order hard stop reached at exponent {0}")]
    OrderHardStop(u64),
    #[error("unit closure exceeded {limit} elements")]
    ClosureLimit { limit: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generators do not generate the group")]
    NotGenerating,
    #[error("group order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
