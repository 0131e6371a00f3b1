use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record: {0}")]
    MalformedRecord(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("corpus contains no token with the required minimum count")]
    EmptyCorpus,

    #[error("no character n-gram can represent {0:?}")]
    NoRepresentableNgrams(String),

    #[error("model file format mismatch: {0}")]
    VersionMismatch(String),

    #[error("malformed lexicon: {0}")]
    MalformedLexicon(String),

    #[error("alias {alias:?} is not representable in space {space:?}")]
    UnrepresentableAlias { alias: String, space: String },

    #[error("gold standard is empty")]
    EmptyGold,

    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }
}
