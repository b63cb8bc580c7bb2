use thiserror::Error;

/// Errors raised by model loading, state validation and the interferometry engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fusion multiplicity {count} for {a} x {b} -> {c}; only multiplicity-free models are supported")]
    MultiplicityUnsupported {
        a: String,
        b: String,
        c: String,
        count: usize,
    },
    #[error("inconsistent model data: {0}")]
    InconsistentData(String),
    #[error("S matrix is not unitary (residual {residual:.3e})")]
    NonModular { residual: f64 },
    #[error("unknown charge `{0}`")]
    UnknownCharge(String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("inadmissible fusion channel: {0}")]
    InadmissibleChannel(String),
    #[error("outcome has probability {probability:.3e}; cannot condition on it")]
    ZeroProbabilityOutcome { probability: f64 },
    #[error("oracle enumeration of {configurations} configurations exceeds the budget of {budget}")]
    OracleTooLarge { configurations: u128, budget: u128 },
    #[error("invalid target state: {0}")]
    InvalidState(String),
    #[error("not a valid qubit density matrix: {0}")]
    NotAState(String),
    #[error("invalid beam splitters: {0}")]
    InvalidSplitters(String),
    #[error("twist count {0} is odd; use the odd-twist protocol")]
    OddTwist(i64),
    #[error("twist count {0} is even; use the even-twist protocol")]
    EvenTwist(i64),
    #[error("splitters are not tuned: {0}")]
    UntunedSplitters(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
