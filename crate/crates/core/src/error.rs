use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The time and frequency windows leave no room for a nonzero vector.
    #[error("infeasible window for M={m}: {forbidden_time} forbidden time + {forbidden_freq} forbidden frequency indices >= {len}")]
    InfeasibleWindow {
        m: u64,
        forbidden_time: usize,
        forbidden_freq: usize,
        len: usize,
    },

    #[error("no solution for M={m}: {reason}")]
    NoSolution { m: u64, reason: String },

    #[error("invalid window parameters: {0}")]
    InvalidWindow(String),

    #[error("certificate failure ({what}): {detail}")]
    CertificateFailure { what: String, detail: String },

    #[error(
        "tau schedule infeasible at level {n} (q={q}, base={base}); smallest valid level is {smallest_valid}"
    )]
    ScheduleInfeasible {
        n: u32,
        q: u32,
        base: u64,
        smallest_valid: u32,
    },

    #[error("empty interval: {0}")]
    EmptyInterval(String),

    #[error("no admissible subinterval at level {n}: {detail}")]
    NoAdmissibleSubinterval { n: u32, detail: String },

    #[error("level {n} is too large to construct: period length {len} exceeds limit {limit}")]
    LevelTooLarge { n: u32, len: u128, limit: usize },

    #[error("test function provides no decay certificate for {0}")]
    NoDecayCertificate(String),

    #[error("mismatched levels: {0}")]
    MismatchedLevels(String),

    #[error("level {n}: {source}")]
    Level {
        n: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn certificate(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::CertificateFailure {
            what: what.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn at_level(self, n: u32) -> Self {
        match self {
            e @ Error::Level { .. } => e,
            e => Error::Level {
                n,
                source: Box::new(e),
            },
        }
    }
}
