use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: argument {value} outside domain ({expected})")]
    Domain {
        op: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// A height or sieve limit above the configured budget was requested.
    #[error("{what} {requested} exceeds the configured budget {budget}")]
    Budget {
        what: &'static str,
        requested: f64,
        budget: f64,
    },
    #[error("root bracket [{lo}, {hi}] has no sign change (F = {f_lo}, {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("not found: {0}")]
    NotFound(String),
    /// A height too close to a zero of Z for a ratio check.
    #[error("height {t} lies within {radius} of the zero {gamma}")]
    NearZero { t: f64, gamma: f64, radius: f64 },
    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            op,
            value,
            expected,
        }
    }

    /// Short machine-readable class name, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Budget { .. } => "budget",
            Error::Bracket { .. } => "bracket",
            Error::NotFound(_) => "not_found",
            Error::NearZero { .. } => "near_zero",
            Error::Checkpoint { .. } => "checkpoint",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
        }
    }
}
