use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("hypothesis violated: {}", .0.join("; "))]
    Inadmissible(Vec<String>),

    #[error("open endpoint: {0}")]
    OpenEndpoint(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("function vanishes identically; ratio undefined")]
    ZeroFunction,

    #[error("boundary truncation above tolerance: {0}")]
    Truncation(String),

    #[error("projection band unresolvable: {0}")]
    UnresolvableBand(String),

    #[error("time window error: {0}")]
    Window(String),

    #[error("step size too large: {0}")]
    StepSize(String),

    #[error("blow-up guard tripped: {0}")]
    BlowUp(String),

    #[error("fixed-point iteration is not contracting: ratios {0:?}")]
    NonContraction(Vec<f64>),

    #[error("oracle unsupported for this packet: {0}")]
    OracleUnsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 hypothesis violation, 2 open
    /// endpoint, 3 numerical failure, 4 usage/config.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inadmissible(_) => 1,
            Error::OpenEndpoint(_) => 2,
            Error::InvalidIndex(_) | Error::Config(_) => 4,
            _ => 3,
        }
    }
}
