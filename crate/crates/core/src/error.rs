use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group order {order} exceeds the limit of {limit}")]
    GroupTooLarge { order: usize, limit: usize },

    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup of order {small} is not subconjugate to subgroup of order {large}")]
    NotSubconjugate { small: usize, large: usize },

    #[error("invalid G-set: {0}")]
    InvalidGSet(String),

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("operands live over different groups")]
    GroupMismatch,

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("inexact division at class {class}")]
    Integrality { class: String },

    #[error("syntax error at line {line}, column {column}: expected {}", expected.join(" or "))]
    Parse { line: usize, column: usize, expected: Vec<String> },

    #[error("coherence: {0}")]
    Coherence(String),

    #[error("{0}")]
    Usage(String),
}
