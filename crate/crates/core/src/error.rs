use crate::trainer::TrainTrace;

/// Errors produced by the simulation, layer, and training code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector argument has the wrong length or parity.
    #[error("invalid length: {0}")]
    InvalidLength(String),

    /// A scalar or structural parameter is out of its valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A forward cache does not match the parameters it is replayed against.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The training loss became non-finite. The trace collected up to the
    /// failing iteration is preserved so callers can inspect or persist it.
    #[error("training diverged at iteration {iteration}: loss is not finite")]
    Divergence {
        iteration: usize,
        trace: Box<TrainTrace>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
