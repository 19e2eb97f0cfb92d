use thiserror::Error;

/// Exit codes: 0 success, 2 no wave or invalid parameters, 3 numerical or
/// I/O failure, 4 validation outside its band.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Model(#[from] tumorwave::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Numerical(String),
    #[error("validation failed: relative speed gap {gap:+.4} outside [{lo}, {hi}]")]
    Validation { gap: f64, lo: f64, hi: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(e) if e.is_no_wave() => 2,
            CliError::Validation { .. } => 4,
            _ => 3,
        }
    }
}
