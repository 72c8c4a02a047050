use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("two-qubit gate addresses qubit {0} twice")]
    DuplicateQubit(usize),

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what} supports at most {max} qubits, got {n}")]
    TooManyQubits {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("feature {index} = {value} lies outside [0, 2π); inputs must be min-max scaled first")]
    FeatureOutOfRange { index: usize, value: f64 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("feature {feature} is constant (min = max = {value}); cannot min-max scale")]
    ConstantFeature { feature: usize, value: f64 },

    #[error("only {found} of {needed} required samples satisfy |expectation| >= {gap} after {refinements} grid refinements")]
    InsufficientCandidates {
        needed: usize,
        found: usize,
        gap: f64,
        refinements: usize,
    },

    #[error("label encoding: {0}")]
    Encoding(String),

    #[error("matrix has a non-zero imaginary part at ({row}, {col})")]
    NonRealMatrix { row: usize, col: usize },

    #[error("config {path}: {message}")]
    Config { path: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("config syntax: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// Process exit code for the command-line front end: 2 config syntax,
    /// 3 invalid configuration or arguments, 4 I/O, 5 bad data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Toml(_) => 2,
            Error::Config { .. }
            | Error::InvalidArgument(_)
            | Error::Encoding(_)
            | Error::DimensionMismatch { .. }
            | Error::TooManyQubits { .. }
            | Error::QubitOutOfRange { .. }
            | Error::DuplicateQubit(_)
            | Error::NonRealMatrix { .. } => 3,
            Error::Io { .. } => 4,
            Error::Parse { .. }
            | Error::Csv(_)
            | Error::EmptyDataset
            | Error::ConstantFeature { .. }
            | Error::FeatureOutOfRange { .. }
            | Error::InsufficientCandidates { .. } => 5,
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
