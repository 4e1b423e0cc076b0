use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("measurement error: {0}")]
    Measurement(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("parameters (n_s = {n_s}, n_p = {n_p}) lie in the symmetric phase, susceptibility is infinite")]
    SymmetricPhase { n_s: f64, n_p: f64 },

    #[error("impact not yet saturated: tail slope {slope:.4e} exceeds twice its standard error {stderr:.4e}")]
    NotSaturated { slope: f64, stderr: f64 },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("realization {index} failed: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by user-provided configuration rather than
    /// by a failed measurement or solver.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::Domain(_) | Error::SymmetricPhase { .. } => true,
            Error::Realization { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
