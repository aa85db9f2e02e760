use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field} must be finite and strictly positive, got {value}")]
    NonPositive { field: String, value: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a permutation of 1..={n}: {images:?}")]
    NotAPermutation { n: usize, images: Vec<usize> },

    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("matrix order must be at least 2, got {0}")]
    OrderTooSmall(usize),

    #[error("diagonal entry ({i},{i}) is {value}, expected 1")]
    Diagonal { i: usize, value: f64 },

    #[error("entries ({i},{j}) = {aij} and ({j},{i}) = {aji} are not reciprocal")]
    NotReciprocal { i: usize, j: usize, aij: f64, aji: f64 },

    #[error("unknown index '{id}'; valid ids: {}", valid.join(", "))]
    UnknownIndex { id: String, valid: Vec<String> },

    #[error("unknown axiom '{name}'; valid axioms: {}", valid.join(", "))]
    UnknownAxiom { name: String, valid: Vec<String> },

    #[error("triads only: expected a 3x3 matrix, got {0}x{0}")]
    NotATriad(usize),

    #[error("witness replay failed: {0}")]
    Replay(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
