use thiserror::Error;

pub type Result<T> = std::result::Result<T, SweError>;

#[derive(Debug, Error)]
pub enum SweError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("negative water height {h:e} at {location}")]
    NegativeHeight { h: f64, location: String },

    #[error("cell {cell} holds more than one dry/wet interface initially; refine the grid so each cell contains at most one shore")]
    MultipleShores { cell: isize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("unknown scenario '{name}'; available: {available}")]
    UnknownScenario { name: String, available: String },

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("internal solver error: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl SweError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        SweError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn csv(path: impl AsRef<std::path::Path>, source: csv::Error) -> Self {
        SweError::Csv {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
