use thiserror::Error;

#[derive(Debug, Error)]
pub enum CdgError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("grading error: {0}")]
    Grading(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CdgError>;
