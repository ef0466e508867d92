use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes. These are part of the command-line contract.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const IO: i32 = 2;
    pub const SHAPE: i32 = 3;
    pub const NO_FACE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Lib(#[from] faceqa::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use faceqa::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Lib(e) => match e {
                E::Io { .. } | E::Decode { .. } | E::Codec(_) => exit::IO,
                E::Shape { .. } | E::Size { .. } | E::Bounds { .. } | E::Degenerate => exit::SHAPE,
                E::NoFace | E::NoBody => exit::NO_FACE,
                E::InvalidImage(_) | E::InvalidParam(_) => exit::USAGE,
            },
        }
    }
}
