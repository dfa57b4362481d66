use thiserror::Error;

/// Errors raised while building, reading or compressing polynomial sets.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite coefficient {0}")]
    InvalidCoefficient(f64),
    #[error("exponent of `{0}` must be at least 1")]
    InvalidExponent(String),
    #[error("variable `{0}` has no assigned value")]
    UnboundVariable(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("abstraction tree has no leaf occurring in the polynomials")]
    EmptyTree,
    #[error("invalid abstraction forest: {}", join(.0))]
    InvalidForest(Vec<String>),
    #[error("forest is not compatible with the polynomials: {}", join(.0))]
    Compatibility(Vec<String>),
    #[error("leaf `{0}` does not occur in the polynomials; clean the tree first")]
    UncleanTree(String),
    #[error("bound {bound} outside 1..={num_m}")]
    Bound { bound: u64, num_m: u64 },
    #[error("not a valid variable set: {0}")]
    InvalidVvs(String),
    #[error("{0} valid variable sets exceed the enumeration cap")]
    TooManyCuts(u128),
    #[error("expected a single abstraction tree, found {0}")]
    NotSingleTree(usize),
    #[error("invalid pair ({0}, {1}): need 1 <= a < b <= |X|")]
    InvalidPair(usize, usize),
    #[error("invalid graph instance: {0}")]
    InvalidGraph(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

fn join(items: &[String]) -> String {
    items.join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
