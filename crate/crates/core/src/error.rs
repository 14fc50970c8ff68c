use thiserror::Error;

pub type Result<T, E = QecError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QecError {
    #[error("qubit count must be at least 1")]
    ZeroQubits,
    #[error("qubit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("qubit index {0} listed more than once")]
    DuplicateIndex(usize),
    #[error("size mismatch: expected {expected} qubits, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("cannot parse Pauli text {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("syndrome length {actual} does not match {expected} generators")]
    SyndromeLength { expected: usize, actual: usize },
    #[error("residual has nonzero syndrome {0}; it is not in the codespace")]
    NonzeroSyndrome(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error("surface code distance must be at least 2, got {0}")]
    SurfaceTooSmall(usize),
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("lookup table over {0} syndrome bits exceeds the 20-bit guard")]
    LookupTooLarge(usize),
    #[error("syndrome {0} has no entry in the lookup table")]
    UnmatchedSyndrome(String),
    #[error("code {0:?} has no lattice layout; matching needs a surface code")]
    NoLayout(String),
    #[error("matching instance too large: {defects} defects exceeds cap {cap}")]
    InstanceTooLarge { defects: usize, cap: usize },
    #[error("no correction found for generator {0}")]
    CorrectionSearch(usize),
    #[error("forced outcome {outcome} has probability {probability:e}")]
    ImpossibleOutcome { outcome: u8, probability: f64 },
    #[error("gate touches qubit {0} twice")]
    IndexClash(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no crossing in range for distances {0} and {1}")]
    NoCrossing(usize, usize),
    #[error("serialization: {0}")]
    Serde(String),
}
