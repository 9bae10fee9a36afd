use thiserror::Error;

/// Errors raised by the solver toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing keyword {0}")]
    MissingKeyword(&'static str),
    #[error("unknown keyword {0}")]
    UnknownKeyword(String),
    #[error("duplicate node id {0}")]
    DuplicateNodeId(usize),
    #[error("customer {customer} demand {demand} exceeds capacity {capacity}")]
    DemandExceedsCapacity {
        customer: usize,
        demand: u32,
        capacity: u32,
    },
    #[error("bad eta: {0}")]
    BadEta(String),
    #[error("unknown customer {0}")]
    UnknownCustomer(usize),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("platoon of {size} modular vehicles is not allowed (max {max})")]
    PlatoonTooLarge { size: usize, max: usize },
    #[error("no feasible attach path")]
    NoFeasiblePath,
    #[error("move is infeasible: {0}")]
    Infeasible(String),
    #[error("move is tabu")]
    Tabu,
    #[error("no admissible move")]
    NoAdmissibleMove,
    #[error("customers cannot be packed into the fleet as sparse routes")]
    InfeasibleSparse,
    #[error("no modular vehicle travels in a platoon")]
    NothingToShake,
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("malformed solution: {0}")]
    MalformedSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
