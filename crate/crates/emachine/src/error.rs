use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("duplicate label: {0}")]
    DuplicateLabel(String),

    #[error("unknown axis: {0}")]
    UnknownAxis(String),

    #[error("axis {0} appears as both target and conditioning variable")]
    AxisOverlap(String),

    #[error("projection onto an empty axis set")]
    EmptyProjection,

    #[error("unknown {kind} label: {label}")]
    UnknownLabel { kind: &'static str, label: String },

    #[error("machine definition error: {0}")]
    MachineDefinition(String),

    #[error("state-transition chain is reducible; states not mutually reachable with {reference}: {unreachable:?}")]
    ReducibleChain {
        reference: String,
        unreachable: Vec<String>,
    },

    #[error("power iteration did not reach residual {tolerance} within {max_iterations} iterations (best {achieved})")]
    NoConvergence {
        tolerance: f64,
        achieved: f64,
        max_iterations: usize,
    },

    #[error("identity precondition violated: {0}")]
    AssumptionViolated(String),

    #[error("trajectory too short: {0} steps (need at least {1})")]
    TrajectoryTooShort(usize, usize),

    #[error("empty history table")]
    EmptyHistory,

    #[error("non-deterministic quotient during state merging: {0}; rerun with a larger history length or more data")]
    NondeterministicQuotient(String),

    #[error("insufficient data to reconstruct a kernel row: {0}")]
    InsufficientData(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("temperature must be positive, got {0}")]
    InvalidTemperature(f64),

    #[error("no partition in the box; the protocol keeps a partition in place between observations")]
    PartitionMissing,

    #[error("impossible outcome: prepared and observed epistemic states are disjoint ({0})")]
    ImpossibleOutcome(String),

    #[error("memory cell is not blank; copy requires a blank target")]
    CellNotBlank,

    #[error("archive inconsistency: {0}")]
    ArchiveInconsistency(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("machine file error: {0}")]
    MachineFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
