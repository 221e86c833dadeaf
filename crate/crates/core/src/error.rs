use thiserror::Error;

/// Errors raised by the set-based probability calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a universe needs at least one label")]
    EmptyUniverse,
    #[error("universe of size {0} exceeds the 64-element limit")]
    UniverseTooLarge(usize),
    #[error("duplicate label `{0}` in universe")]
    DuplicateLabel(String),
    #[error("label `{0}` must be nonempty and free of whitespace, commas, and braces")]
    BadLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("incompatible universes: operands belong to different universes")]
    UniverseMismatch,
    #[error("bit mask {mask:#x} has bits outside a universe of size {n}")]
    BitsOutOfRange { mask: u64, n: usize },
    #[error("malformed subset literal `{0}`")]
    BadSubsetLiteral(String),
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("expected {expected} entries, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,
    #[error("basis `{basis}` is linearly dependent: {subset} is a sum of the preceding vectors")]
    DependentBasis { basis: String, subset: String },
    #[error("measurement of the zero vector is undefined")]
    EmptyState,
    #[error("empty block")]
    EmptyBlock,
    #[error("eigenvalue {value} is not in the spectrum [{spectrum}]")]
    NotInSpectrum { value: String, spectrum: String },
    #[error("attributes do not form a complete set of compatible attributes")]
    NotCsca,
    #[error("blocks do not form a partition: {0}")]
    InvalidPartition(String),
    #[error("{what} is limited to n <= {limit}, got n = {n}")]
    TooLargeFor { what: &'static str, limit: usize, n: usize },
    #[error("probability weights must be nonnegative and sum to 1")]
    BadDistribution,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
