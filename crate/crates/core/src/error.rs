use thiserror::Error;

/// Errors raised by enumerators, combinators and the problem substrate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("step called on a terminated enumerator")]
    Terminated,

    #[error("enumerator does not support snapshots")]
    NotSnapshottable,

    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A declared complexity bound (incremental time, average delay, ...) did
    /// not hold on this run.
    #[error("declared bound violated: {0}")]
    BoundViolation(String),

    #[error("gap budget exceeded: {stored} stored shortcuts, budget {budget}")]
    GapBudgetExceeded { stored: usize, budget: u64 },

    #[error("density precondition violated: no fresh stock at gap index {index}")]
    DensityViolation { index: u64 },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty instance: {0}")]
    EmptyInstance(String),
}

pub type Result<T, E = EnumError> = std::result::Result<T, E>;
