use thiserror::Error;

/// Errors raised while building or validating a problem instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("search space size n = {0} is too small (need n >= 2)")]
    TooSmall(u64),
    #[error("set X is empty")]
    EmptyX,
    #[error("set Y is empty")]
    EmptyY,
    #[error("Y is not a subset of X: index {index} satisfies f_Y but not f_X")]
    NotSubset { index: u64 },
    #[error("index {index} is out of range for n = {n}")]
    IndexOutOfRange { index: u64, n: u64 },
    #[error("invalid membership description: {0}")]
    InvalidSpec(String),
}

/// Errors raised by the simulators, the schedule driver and the cost model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state dimension {state} does not match instance size {instance}")]
    DimensionMismatch { state: usize, instance: u64 },
    #[error("instance size {n} exceeds the full-state cap of {cap} amplitudes")]
    InstanceTooLarge { n: u64, cap: u64 },
    #[error("amplitudes in class {class} are not uniform (spread {spread:e})")]
    NotClassUniform { class: &'static str, spread: f64 },
    #[error("trace has {found} phase-1 points, need at least {needed}")]
    InsufficientTrace { found: usize, needed: usize },
    #[error("malformed state dump: {0}")]
    BadDump(String),
    #[error("cost parameter {name} must be positive and finite, got {value}")]
    InvalidCost { name: &'static str, value: f64 },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}
