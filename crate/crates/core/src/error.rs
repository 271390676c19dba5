use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {0} appears more than once")]
    DuplicatePrime(u64),

    #[error("expected {expected} boundary components, found {found}")]
    ComponentCount { expected: usize, found: usize },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no residue outside A+ and A- modulo {prime}")]
    NoAdmissibleResidue { prime: u64 },

    #[error("A{side}_{prime} has dimension {dimension}, exceeding the genus {genus}")]
    ApDimensionExceeded {
        prime: u64,
        side: char,
        dimension: usize,
        genus: usize,
    },

    #[error("content mismatch: content(b+) = {plus}, content(b-) = {minus}")]
    ContentMismatch { plus: String, minus: String },

    #[error("rank inequality violated: {0}")]
    RankInequality(String),

    #[error("empty support")]
    EmptySupport,

    #[error("missing pairing data for class {0}")]
    MissingPairing(String),
}
