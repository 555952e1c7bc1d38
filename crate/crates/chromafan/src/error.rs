use std::path::PathBuf;

use crate::knowledge::ModelViolation;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("no chromatic content")]
    NoChromaticContent,
    #[error("degenerate skeleton: {0}")]
    DegenerateSkeleton(String),
    #[error("radii not identifiable: branch-point radii {radii:?}")]
    RadiiNotIdentifiable { radii: Vec<f64> },
    #[error("invalid model: {0}")]
    InvalidModel(#[from] ModelViolation),
    #[error("unsupported model version {0}")]
    UnsupportedVersion(u32),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
