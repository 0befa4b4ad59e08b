use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ilp_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    /// A checked property does not hold.
    #[error("{0}")]
    Failed(String),
    /// The question could not be decided within the given limits.
    #[error("{0}")]
    Undecided(String),
}

impl CliError {
    pub fn json(e: serde_json::Error) -> Self {
        CliError::Input(format!(
            "invalid JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    }

    /// 1 for a failed property, 2 for bad input, 3 for exceeded caps and
    /// undecided questions.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) | CliError::Core(ilp_core::Error::RangeDiscrepancy { .. }) => 1,
            CliError::Undecided(_)
            | CliError::Core(ilp_core::Error::CapExceeded { .. })
            | CliError::Core(ilp_core::Error::UnguardedUpperBound) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
