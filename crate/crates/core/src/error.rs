use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has rank {rank}, expected full column rank {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("polynomial {poly:#x} is not irreducible of degree {degree}")]
    Reducible { poly: u32, degree: u32 },
    #[error("element {value:#x} is not in GF(2^{degree})")]
    InvalidElement { value: u32, degree: u32 },
    #[error("no linear broadcast code found in {attempts} attempts over GF(2^{degree}); use a larger field")]
    FieldTooSmall { attempts: usize, degree: u32 },
    #[error("terminal {terminal} needs {needed} bits per block but the network delivers at most {available}")]
    InfeasibleRate {
        terminal: usize,
        needed: usize,
        available: usize,
    },
    #[error("unknown terminal {0}")]
    UnknownTerminal(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Validation-type errors map to CLI exit status 2, model errors to 3.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::IndexOutOfRange { .. }
                | Error::DimensionMismatch(_)
                | Error::InvalidParameter { .. }
                | Error::Parse { .. }
                | Error::InvalidNetwork(_)
                | Error::Config { .. }
                | Error::Schema(_)
                | Error::UnknownTerminal(_)
                | Error::InvalidElement { .. }
                | Error::Reducible { .. }
                | Error::TooLarge(_)
        )
    }
}
