use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value is missing, malformed or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// Closed-form weights with a zero multiplier and a dead relay->destination link.
    #[error("singular closed form: relay {relay} has |g| = 0 with lambda = 0")]
    Singular { relay: usize },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("consensus diverged at iteration {iteration} (mu_lambda = {mu_lambda}, mu_tau = {mu_tau})")]
    Divergence { iteration: usize, mu_lambda: f64, mu_tau: f64 },

    #[error("exhaustive search over {relays} relays exceeds the guard of {limit}")]
    TooLarge { relays: usize, limit: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 config, 2 numeric, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Config(_) | Error::TooLarge { .. } => 1,
            Error::Singular { .. } | Error::Numeric(_) | Error::Divergence { .. } => 2,
            Error::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
