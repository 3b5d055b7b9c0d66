use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("topology generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("degenerate sample set: {0}")]
    DegenerateSamples(String),

    #[error("rejection budget of {budget} attempts exhausted for target D = {target}")]
    RejectionBudgetExhausted { target: f64, budget: usize },

    #[error("channel {0} is not part of the link load")]
    ChannelNotLoaded(usize),

    #[error("numeric GN integration did not converge (relative error estimate {estimate:.3e})")]
    NonConvergence { estimate: f64 },

    #[error("no path between nodes {0} and {1}")]
    NoPath(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("{count} infeasible instances exceed the budget of {budget}")]
    InfeasibleBudgetExceeded { count: usize, budget: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
