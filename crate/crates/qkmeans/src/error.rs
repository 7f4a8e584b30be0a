//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across circuit construction, execution,
/// estimation, clustering, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A circuit failed validation while being built or simulated.
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// A caller-supplied value is outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Readout calibration with p01 + p10 >= 1 has a singular confusion
    /// matrix and cannot be inverted.
    #[error("readout calibration not invertible: p01 ({p01}) + p10 ({p10}) must be < 1")]
    SingularCalibration { p01: f64, p10: f64 },

    /// A job held more circuits than the profile accepts at once.
    #[error("job of {submitted} circuits exceeds the limit of {max} circuits per job")]
    TooManyCircuits { submitted: usize, max: usize },

    /// A job requested more shots than the profile allows.
    #[error("{requested} shots exceed the profile limit of {max}")]
    TooManyShots { requested: u64, max: u64 },

    /// A circuit needs more qubits than the device has.
    #[error("circuit of width {width} does not fit the {qubits}-qubit device")]
    CircuitTooWide { width: usize, qubits: usize },

    /// Rejection sampling could not place points at the requested
    /// pairwise separation.
    #[error("could not place {count} points at separation {min_dist} within {attempts} draws")]
    InfeasibleSeparation {
        count: usize,
        min_dist: f64,
        attempts: usize,
    },

    /// No candidate seed met the convergence budget.
    #[error("no seed out of {tried} converged within {budget} iterations")]
    NoSeedFound { tried: u64, budget: usize },

    /// Weighted precision is undefined when a true class's matching
    /// predicted column is empty.
    #[error("weighted precision undefined: predicted class {class} is empty but its true class has support")]
    EmptyPredictedClass { class: usize },

    /// Two sequences that must align have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// A malformed CSV row or header, with its 1-based line number.
    #[error("csv error at line {line}: {message}")]
    Csv { line: usize, message: String },

    /// A malformed profile or configuration file.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
