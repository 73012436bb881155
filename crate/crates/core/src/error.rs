use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// A product or basis request would leave the truncated range; results
    /// past the bound are unknown, never zero.
    #[error("internal degree {requested} exceeds the truncation bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },

    #[error("relation `{relation}` is not homogeneous")]
    NonHomogeneous { relation: String },

    #[error("relation `{relation}` has internal degree {degree}; relations must have degree at least 2")]
    RelationDegree { relation: String, degree: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },

    #[error("boundary of `{name}` is not a cycle")]
    NotACycle { name: String },

    #[error("variable `{name}` of homological degree {hdeg} cannot have kind {kind}")]
    ParityMismatch {
        name: String,
        hdeg: usize,
        kind: String,
    },

    #[error("bidegree mismatch: expected ({expected_h}, {expected_j}), found ({found_h}, {found_j})")]
    Bidegree {
        expected_h: usize,
        expected_j: usize,
        found_h: usize,
        found_j: usize,
    },

    #[error("not a chain map: {0}")]
    NotAChainMap(String),

    #[error("H_0 of the structure map is not surjective (internal degree {intdeg})")]
    NotSurjective { intdeg: usize },

    #[error("unit element rejected: {0}")]
    UnitElement(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inadmissible input for `{statement}`: {reason}")]
    Inadmissible { statement: String, reason: String },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(String),
}
