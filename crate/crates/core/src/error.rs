use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no solution")]
    NoSolution,
    #[error("invalid value: {0}")]
    Invariant(String),
    #[error("multiplication table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element 0 is not a two-sided identity (fails at element {0})")]
    NoIdentity(usize),
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("invalid group table: {0}")]
    BadTable(String),
    #[error("G-module invariant violated: {0}")]
    ModuleInvariant(String),
    #[error("module map invariant violated: {0}")]
    MapInvariant(String),
    #[error("cocycle invariant violated: {0}")]
    CocycleInvariant(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("{what} exceeds cap: needs {required}, cap is {cap}")]
    CapExceeded { what: String, required: u128, cap: u128 },
    #[error("degree {degree} outside window [-{window}, {window}]")]
    DegreeOutOfWindow { degree: i64, window: i64 },
    #[error("module is infinite")]
    InfiniteModule,
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("group is not a p-group")]
    NotPGroup,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for resource-cap failures (as opposed to invalid input).
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::DegreeOutOfWindow { .. })
    }
}
