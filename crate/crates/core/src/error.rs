use thiserror::Error;

/// Errors raised by the state, disk and protocol layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("amplitude vector is zero")]
    ZeroVector,
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("{n_qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n_qubits: usize, max: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("control and target are both qubit {0}")]
    ControlEqualsTarget(usize),
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("gate rows are not orthonormal")]
    NotUnitary,
    #[error("outcome has probability {probability}, below the 1e-12 floor")]
    ImpossibleOutcome { probability: f64 },
    #[error("random draw {0} is outside [0, 1)")]
    InvalidDraw(f64),
    #[error("disk has no regions")]
    EmptyDisk,
    #[error("region fraction {0} must be in (0, 1]")]
    InvalidFraction(f64),
    #[error("region colors have length {found}, expected {expected}")]
    ColorArity { expected: usize, found: usize },
    #[error("region fractions sum to {0}, expected 1")]
    FractionSum(f64),
    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),
    #[error("disk cancels to a zero state")]
    FullyCancelled,
    #[error("empty qubit list")]
    EmptyQubitList,
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("stacked layout needs at least two qubits")]
    StackedNeedsTwoQubits,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
