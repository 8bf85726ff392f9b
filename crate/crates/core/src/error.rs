use thiserror::Error;

use crate::dist::Param;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter {param}: {reason}")]
    InvalidParam { param: Param, reason: String },

    /// The marginal of `b` is 0 or 1, so the named parameter cannot be identified.
    #[error("degenerate marginal: {0} is undefined")]
    DegenerateMarginal(Param),

    #[error("cannot condition on b={b}: the b-marginal is zero")]
    ConditionOnNull { b: usize },

    #[error("boundary parameters: {0} must lie strictly between 0 and 1")]
    BoundaryParams(Param),

    #[error("({s}, {t}) is outside the solution family")]
    OutOfRange { s: String, t: String },

    #[error("table is not a solution of the constraint system: {0}")]
    NotASolution(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{settings} settings need {atoms} atoms, above the budget of {budget}")]
    TooManySettings {
        settings: usize,
        atoms: u128,
        budget: u128,
    },

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("invalid settings family: {0}")]
    InvalidFamily(String),

    #[error("empty sample")]
    EmptySample,

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}
