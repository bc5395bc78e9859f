use std::path::PathBuf;

use thiserror::Error;
use umbral_spectral::SpectralError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Parameters fail the operation's preconditions.
    #[error("{0}")]
    Usage(String),
    /// A numerical precondition fails inside the computation.
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Io { .. } => "io",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<umbral_core::Error> for CliError {
    fn from(e: umbral_core::Error) -> Self {
        use umbral_core::Error as E;
        match e {
            E::Parse(_) | E::UnknownKind(_) | E::NotPrime(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Lattice(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

/// Fails with a usage error unless `ok`.
pub fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}
