use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("agent {agent}, item {item}: value {value} is negative")]
    NegativeValue { agent: usize, item: usize, value: String },

    #[error("agent {agent}, item {item}: value {value} is not an integer")]
    NonIntegralValue { agent: usize, item: usize, value: String },

    #[error("agent {agent}, item {item}: value {value} exceeds the supported maximum {max}")]
    ValueTooLarge {
        agent: usize,
        item: usize,
        value: u64,
        max: u64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("valuation class mismatch: {0}")]
    ClassMismatch(String),

    #[error("item index {item} out of range (instance has {m} items)")]
    ItemOutOfRange { item: usize, m: usize },

    #[error("agent index {agent} out of range (instance has {n} agents)")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("item {item} appears in more than one bundle")]
    DuplicateItem { item: usize },

    #[error("allocation is incomplete: {unallocated} item(s) are not assigned")]
    IncompleteAllocation { unallocated: usize },

    #[error("invalid agent order: {0}")]
    InvalidOrder(String),

    #[error("operation requires {expected} agents, instance has {actual}")]
    WrongAgentCount { expected: usize, actual: usize },

    #[error("{what} too large for enumeration: {size} exceeds the limit {limit}")]
    TooLarge { what: String, size: u128, limit: u128 },

    #[error("negative cycle through vertex {vertex}")]
    NegativeCycle { vertex: usize },

    #[error("allocation is not envy-freeable (the envy graph has a positive-weight cycle)")]
    NotEnvyFreeable,

    #[error("edge weight overflow: m^t * m = {m}^{t} * {m} does not fit in 127 bits; use fewer distinct values")]
    WeightOverflow { m: usize, t: usize },

    #[error("graph has no perfect matching")]
    NoPerfectMatching,

    #[error("invalid alpha {0}: expected a rational P/Q with 0 < P < Q")]
    InvalidAlpha(String),

    #[error(
        "payment grid has {vertices} vertices, above the cap {cap}; rescale valuations to shrink m*Delta"
    )]
    GridTooLarge { vertices: usize, cap: usize },

    #[error("invalid payment constraint: {0}")]
    InvalidConstraint(String),

    #[error("invalid bipartite graph: {0}")]
    InvalidGraph(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("oracle invariant violated: {0}")]
    OracleInvariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
