use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no terms supplied")]
    EmptyInput,

    #[error("term {index} has an all-zero event pattern")]
    ZeroPattern { index: usize },

    #[error("term {index} has pattern length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("model needs at least 2 ions, got {n}")]
    TooFewIons { n: usize },

    #[error("ion {ion} carries no information (zero ionic count and in no unionic term)")]
    IonAbsent { ion: usize },

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("model is not canonical: {0}")]
    NonCanonical(String),

    #[error("not a simplex point: {0}")]
    NotSimplicial(String),

    #[error("singular evaluation: linear form of term {term} is {value:e}")]
    SingularEvaluation { term: usize, value: f64 },

    #[error("union of fragments has zero count")]
    DegenerateUnion,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("singular Hessian at iteration {iteration}")]
    SingularHessian { iteration: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
