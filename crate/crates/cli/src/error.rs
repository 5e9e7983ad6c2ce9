use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("correctness mismatch: {0}")]
    Mismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("resource failure: {0}")]
    Resource(String),

    #[error(transparent)]
    Core(#[from] paircount_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit code: 1 mismatch, 2 configuration, 3 resources.
    pub fn exit_code(&self) -> i32 {
        use paircount_core::Error as E;
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Config(_) => 2,
            CliError::Core(
                E::SpaceTooLarge { .. } | E::AllocationFailed { .. } | E::WorkerPanicked(_),
            ) => 3,
            CliError::Core(E::OddContactAccumulator(_) | E::AsymmetricInteraction { .. }) => 1,
            CliError::Core(_) => 2,
            CliError::Resource(_) | CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
