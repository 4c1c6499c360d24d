use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: binary PGM required (magic P5), found {found:?}")]
    BadMagic { path: PathBuf, found: String },
    #[error("{path}: malformed PGM header: {reason}")]
    BadHeader { path: PathBuf, reason: String },
    #[error("{path}: maxval must be 255, found {maxval}")]
    BadMaxval { path: PathBuf, maxval: u32 },
    #[error("{path}: truncated pixel data: expected {expected} bytes, found {found}")]
    Truncated {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("frame {frame}: size {found_cols}x{found_rows} differs from {cols}x{rows} of the first frame")]
    InconsistentDims {
        frame: u64,
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("{path}: no frame index in file name")]
    NoIndex { path: PathBuf },
    #[error("duplicate frame index {0}")]
    DuplicateIndex(u64),
    #[error("missing frame index {missing} in sequence")]
    MissingIndex { missing: u64 },
    #[error("empty sequence")]
    EmptySequence,
    #[error("unknown scene '{name}'; valid scenes: {valid}")]
    UnknownScene { name: String, valid: String },
    #[error("unknown suite '{name}'; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },
    #[error("invalid override '{0}': expected key=value")]
    BadOverride(String),
    #[error(transparent)]
    Params(#[from] dsnn::ParamError),
    #[error(transparent)]
    Model(#[from] dsnn::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
