use thiserror::Error;

/// Errors raised by graph construction, the simulator and the algorithms built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge list is not 2-colorable: odd cycle through node {node}")]
    OddCycle { node: u64 },

    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: u64, v: u64 },

    #[error("self-loop on node {node}")]
    SelfLoop { node: u64 },

    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: u64, n: usize },

    #[error("edge {u}-{v} joins two nodes on the same side")]
    SameSideEdge { u: u64, v: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid subgraph view: {0}")]
    InvalidView(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("augmenting path of length {found} exists, shorter than the requested {requested}")]
    ShorterPathExists { found: u32, requested: u32 },

    #[error("path enumeration exceeded the cap of {cap} partial paths")]
    PathCapExceeded { cap: u64 },

    #[error("round cap of {cap} exceeded")]
    RoundCapExceeded { cap: u64 },

    #[error("program fault at node {node} in round {round}: {msg}")]
    ProgramFault { node: u64, round: u64, msg: String },

    #[error("free B-node {node} reached at odd level {level}: short augmenting path witness")]
    ShortAugPathWitness { node: u64, level: u32 },

    #[error("cluster {cluster} is not spanned by its tree (node {node} unreachable)")]
    DisconnectedCluster { cluster: u64, node: u64 },

    #[error("extended clusters {first} and {second} share node {node}")]
    ClusterOverlap { first: u64, second: u64, node: u64 },

    #[error("internal consistency violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
