use thiserror::Error;

/// Errors raised by lattice constructions and queries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("lattice not even: diagonal entry {index} is {value}")]
    NotEven { index: usize, value: String },
    #[error("lattice is degenerate; kernel vector {kernel:?}")]
    Degenerate { kernel: Vec<String> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("zero vector has no divisibility")]
    ZeroVector,
    #[error("lattice is not {p}-elementary: invariant factor {factor}")]
    NotPElementary { p: u64, factor: String },
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("lattice is indefinite")]
    Indefinite,
    #[error("lattices have different signatures")]
    MixedSignature,
    #[error("rank {rank} exceeds the supported cap {cap}")]
    RankCap { rank: usize, cap: usize },
    #[error("group enumeration exceeded {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("isometry order exceeds the cap {cap}")]
    InfiniteOrder { cap: u32 },
    #[error("isometry does not have prime order (order {0})")]
    NotPrimeOrder(u32),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("gluing group is not 2-torsion: elementary divisor {0}")]
    GlueNotTwoTorsion(String),
    #[error("vector is not orthogonal to the sublattice")]
    NotOrthogonal,
    #[error("operation not applicable: {0}")]
    Inapplicable(String),
    #[error("integer {0} does not fit the enumeration kernel")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
