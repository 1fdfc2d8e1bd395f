use alloc::string::String;
use core::fmt;

/// Errors raised by table, model and graph operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    UnknownVariable(String),
    DuplicateVariable(String),
    EmptyVariableName,
    /// More binary variables than the dense layout supports.
    TooManyVariables(usize),
    NegativeCount {
        index: usize,
        value: f64,
    },
    /// Counts must be finite.
    NonFiniteCount {
        index: usize,
    },
    CountLength {
        expected: usize,
        found: usize,
    },
    ZeroTotal,
    PartialAddress,
    InvalidLevel {
        variable: String,
        level: u8,
    },
    SchemaMismatch,
    InvalidGraph(String),
    /// Operation requires a graph with only full-line edges.
    NotFullLine,
    TooManyNodes {
        nodes: usize,
        cap: usize,
    },
    Formula {
        position: usize,
        message: String,
    },
    MalformedSequence(String),
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            Error::DuplicateVariable(v) => write!(f, "variable `{v}` listed more than once"),
            Error::EmptyVariableName => f.write_str("variable names must be nonempty"),
            Error::TooManyVariables(k) => write!(
                f,
                "{k} variables exceed the dense table limit of {}",
                crate::table::MAX_VARIABLES
            ),
            Error::NegativeCount { index, value } => {
                write!(f, "negative count {value} at cell {index}")
            }
            Error::NonFiniteCount { index } => write!(f, "non-finite count at cell {index}"),
            Error::CountLength { expected, found } => {
                write!(f, "expected {expected} counts, found {found}")
            }
            Error::ZeroTotal => f.write_str("table total is zero"),
            Error::PartialAddress => f.write_str("cell address does not assign every variable"),
            Error::InvalidLevel { variable, level } => {
                write!(
                    f,
                    "level {level} is not valid for binary variable `{variable}`"
                )
            }
            Error::SchemaMismatch => f.write_str("schemas do not match"),
            Error::InvalidGraph(msg) => write!(f, "invalid graph: {msg}"),
            Error::NotFullLine => f.write_str("graph has arrow or dashed edges; full lines only"),
            Error::TooManyNodes { nodes, cap } => {
                write!(f, "{nodes} nodes exceed the enumeration cap of {cap}")
            }
            Error::Formula { position, message } => {
                write!(f, "formula error at column {}: {message}", position + 1)
            }
            Error::MalformedSequence(msg) => write!(f, "malformed decomposition sequence: {msg}"),
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
