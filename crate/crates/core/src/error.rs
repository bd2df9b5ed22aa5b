use alloc::string::String;

/// Errors produced by the scoring pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("string too short for log2 scaling (length {0})")]
    TooShort(usize),
    #[error("invalid bit symbol {0:?}")]
    InvalidSymbol(char),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("integration range excludes support")]
    RangeExcludesSupport,
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("undefined correlation: input is constant")]
    UndefinedCorrelation,
    #[error("qubit index {index} out of range for {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("control and target must differ (both {0})")]
    SameQubit(usize),
    #[error("register too large: {0} qubits (max {max})", max = crate::qsim::MAX_QUBITS)]
    RegisterTooLarge(usize),
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("d must be a multiple of 2·n_q (d = {d}, n_q = {qubits})")]
    FeatureMapDivisibility { d: usize, qubits: usize },
    #[error("parameter count mismatch: expected {expected}, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("positional encoding needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = core::result::Result<T, Error>;
