use thiserror::Error;

/// Everything that can go wrong while building matrices, replaying paths or
/// running the bounded searches. Message texts are part of the CLI surface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("matrix needs at least two agents, got {0}")]
    TooFewAgents(usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("unknown agent label {0:?}")]
    UnknownAgent(String),

    #[error("diagonal cell ({0},{0}) undefined")]
    DiagonalCell(String),

    #[error("self-pass forbidden: {0} cannot select itself")]
    SelfPass(String),

    #[error("illegal step at index {index}: cell ({submitter},{receiver}) is not blue")]
    IllegalStep {
        index: usize,
        submitter: String,
        receiver: String,
    },

    #[error("script exhausted at choice point in step {index}")]
    ScriptExhausted { index: usize },

    #[error("script picked {receiver} at step {index}, not a blue successor of {submitter}")]
    ScriptIllegalChoice {
        index: usize,
        submitter: String,
        receiver: String,
    },

    #[error("branch explosion: more than {cap} branches explored")]
    BranchExplosion { cap: u64 },

    #[error("cycle explosion: more than {cap} elementary cycles")]
    CycleExplosion { cap: u64 },

    #[error("not a frame edge: ({0},{1})")]
    NotFrameEdge(String, String),

    #[error("stability not reached within {steps} steps")]
    NotStabilized { steps: usize },

    #[error("cell value overflow at ({0},{1})")]
    ValueOverflow(String, String),

    #[error("decomposition failure: {0}")]
    DecompositionFailure(String),

    #[error("reduction failure: {0}")]
    ReductionFailure(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GameError>;
