use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid representation: {0}")]
    Representation(String),
    #[error("not a morphism: {0}")]
    Morphism(String),
    #[error("not a subobject: {0}")]
    NotSubobject(String),
    #[error("invalid cocycle: {0}")]
    Cocycle(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("computation too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
