// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElem(String),
    #[error("unknown element `{0}`")]
    UnknownElem(String),
    #[error("order relation has a cycle: {}", .0.join(" <= "))]
    CycleDetected(Vec<String>),
    #[error("`{elem}` is not below `{z}`")]
    NotBelowZ { elem: String, z: String },
    #[error("no least upper bound below `{z}`: the poset is not an L-domain there")]
    NoLocalLub { z: String },
    #[error("{what}: size {size} exceeds the limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("malformed system: {0}")]
    MalformedSystem(String),
    #[error("{0} is not in Con")]
    NotConsistent(String),
    #[error("system is not an information system with witnesses: {0}")]
    InvalidSystem(String),
    #[error("malformed frame: {0}")]
    MalformedFrame(String),
    #[error("frame is not an information frame: {0}")]
    InvalidFrame(String),

    #[error("{0} is not a state")]
    NotAState(String),
    #[error("{x} is not contained in {z}")]
    NotBounded { x: String, z: String },

    #[error("poset is not an L-domain: {0}")]
    NotLDomain(String),
    #[error("isomorphism check failed: {0}")]
    IsoCheckFailed(String),

    #[error("malformed map: {0}")]
    MalformedMap(String),
    #[error("not an approximable mapping: {0}")]
    InvalidMap(String),
    #[error("system mismatch: {0}")]
    SystemMismatch(String),
    #[error("state function is not monotone: {0}")]
    NotMonotone(String),

    #[error("condition (BC) fails: {0}")]
    BcViolated(String),
    #[error("condition (ALG+) fails: {0}")]
    AlgPlusViolated(String),
    #[error("fresh token name `{0}` is already a token")]
    FreshTokenClash(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected a `{expected}` document, found `{found}`")]
    KindMismatch { expected: String, found: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn size(what: &'static str, size: usize, limit: usize) -> Self {
        Error::SizeLimitExceeded { what, size, limit }
    }
}
