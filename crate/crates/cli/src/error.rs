use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Numeric(#[from] polycm::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(e) => match e {
                polycm::Error::Domain(_) => EXIT_USAGE,
                polycm::Error::SearchExhausted { .. } | polycm::Error::Unclassified { .. } => {
                    EXIT_VERIFICATION
                }
                _ => EXIT_NUMERIC,
            },
            // unwritable --out path
            CliError::Io(_) => EXIT_USAGE,
            CliError::Json(_) | CliError::Csv(_) => EXIT_NUMERIC,
        }
    }
}
