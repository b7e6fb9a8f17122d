use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("an instance needs at least one agent")]
    NoAgents,
    #[error("agent {} out of range for {agents} agents", .agent + 1)]
    UnknownAgent { agent: usize, agents: usize },
    #[error("duplicate item identifier `{0}`")]
    DuplicateItem(String),
    #[error("unknown item identifier `{0}`")]
    UnknownItem(String),
    #[error("item `{0}` is not assigned to any agent")]
    UnassignedItem(String),
    #[error("valuation tensor has {found} entries, expected {expected}")]
    TensorShape { expected: usize, found: usize },
    #[error("allocation covers {found} items but the instance has {expected}")]
    ItemCountMismatch { expected: usize, found: usize },
    #[error("allocation is over {found} agents but the instance has {expected}")]
    AgentCountMismatch { expected: usize, found: usize },
    #[error("ordered pair needs two distinct agents, got ({}, {})", .0 + 1, .0 + 1)]
    SameAgent(usize),
    #[error("search space of {required} exceeds budget {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("{0}")]
    Precondition(String),
    #[error("{0} is not supported by this engine")]
    Unsupported(String),
    #[error("Nash welfare undefined: agent {} has negative utility {utility}", .agent + 1)]
    NegativeUtility { agent: usize, utility: String },
    #[error("agent {} uses {count} distinct values; at most two allowed", .agent + 1)]
    TooManyValues { agent: usize, count: usize },
    #[error("tau({}, {}) = {value} must be positive", .i + 1, .j + 1)]
    NonPositiveTau { i: usize, j: usize, value: String },
    #[error("network graph is disconnected: no path between agents {} and {}", .0 + 1, .1 + 1)]
    Disconnected(usize, usize),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}
