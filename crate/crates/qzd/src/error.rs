use std::io;
use std::path::PathBuf;

/// Errors raised by the experiment layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Physics(#[from] qzd_core::Error),

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },

    #[error("invalid spec: {0}")]
    Spec(String),

    #[error("unknown preset `{0}` (expected one of fig2, fig3, fig4, fig5b, fig5c, fig5d)")]
    UnknownPreset(String),

    #[error("invalid override `{key}`: {reason}")]
    Override { key: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Serialize(#[from] toml::ser::Error),

    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for physics failures, 2 for everything the
    /// user can fix by changing the invocation or the config.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Physics(_) | Error::Pool(_) => 1,
            _ => 2,
        }
    }
}
