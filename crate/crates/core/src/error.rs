use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("asymmetric pair ({i}, {j}) has odd sum {sum}; integer mean is undefined")]
    NonIntegerSymmetrization { i: usize, j: usize, sum: i64 },

    #[error("coefficient {value} at ({i}, {j}) exceeds the 8-bit synaptic range")]
    WeightOutOfRange { i: usize, j: usize, value: i64 },

    #[error("coefficient {0} does not fit in 32 bits")]
    CoefficientOverflow(i64),

    #[error("invalid temperature {0}: must be positive")]
    InvalidTemperature(f64),

    #[error("random value {0} does not fit in 24 bits")]
    RandOutOfRange(u32),

    #[error("invalid refractory policy [{min}, {max}]")]
    InvalidRefractory { min: u32, max: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("network needs at least one variable")]
    EmptyProblem,

    #[error("invalid density {0}: must lie in [0, 1]")]
    InvalidDensity(f64),

    #[error("graph has {n} nodes; exact MIS is limited to {max}")]
    TooLarge { n: usize, max: usize },

    #[error("best-known cost {0} must be negative")]
    InvalidBks(i64),

    #[error("no best-known solution cached for instance n={n} density={density} seed={seed}; run the `bks` subcommand first")]
    MissingBks { n: usize, density: f64, seed: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
