use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the faceqa library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to decode {path}: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("shape mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    Shape {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("{what} is {w}x{h}, smaller than the required {min_w}x{min_h}")]
    Size {
        what: String,
        w: usize,
        h: usize,
        min_w: usize,
        min_h: usize,
    },

    #[error("rect {x0},{y0},{w},{h} lies outside the {img_w}x{img_h} image")]
    Bounds {
        x0: usize,
        y0: usize,
        w: usize,
        h: usize,
        img_w: usize,
        img_h: usize,
    },

    #[error("no face region detected")]
    NoFace,

    #[error("face region covers the whole image; no body region left")]
    NoBody,

    #[error("no usable windows to pool")]
    Degenerate,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("codec error: {0}")]
    Codec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
