use thiserror::Error;

use crate::lapsig::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid signature: {}", format_violations(.0))]
    InvalidSignature(Vec<Violation>),

    #[error("not a Sturm permutation: {0}")]
    NotSturm(String),

    #[error("not an integrable involution: {0}")]
    NotIntegrable(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("census limit exceeded: N = {n} exceeds the limit {limit}")]
    LimitExceeded { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph contains a directed cycle")]
    Cyclic,

    #[error("pairing inconsistent with graph: {0}")]
    PairingInconsistent(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    /// Parse and lexical failures, as opposed to well-formed inputs that fail a predicate.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::MalformedPermutation(_))
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInvariant(_))
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
