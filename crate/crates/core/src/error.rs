use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible rings: {0}")]
    IncompatibleRing(String),
    #[error("no assignment for generator `{0}`")]
    MissingAssignment(String),
    #[error("assignment for `{0}` raises weight")]
    WeightIncrease(String),
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("composition domain: {0}")]
    CompositionDomain(String),
    #[error("reversion failed: {0}")]
    Reversion(String),
    #[error("exp/log domain: {0}")]
    ExpLogDomain(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("unknown genus `{0}`")]
    UnknownGenus(String),
    #[error("inconsistent unit scale: {0}")]
    InconsistentUnitScale(String),
    #[error("unsupported model `{0}`")]
    UnsupportedModel(String),
    #[error("degenerate pairing: {0}")]
    Duality(String),
    #[error("Adams operation out of range: {0}")]
    AdamsRange(String),
    #[error("insufficient exterior powers: need {needed}, got {got}")]
    InsufficientExteriorPowers { needed: usize, got: usize },
    #[error("line bundle not invertible: {0}")]
    NonInvertibleLine(String),
    #[error("undeclared pole: {0}")]
    UndeclaredPole(String),
    #[error("incompatible algebras: {0}")]
    IncompatibleAlgebra(String),
    #[error("polarization: {0}")]
    Polarization(String),
    #[error("pole at {0}")]
    PoleAtBoundary(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema: {0}")]
    Schema(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
