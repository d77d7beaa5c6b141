use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSTABLE: i32 = 1;
pub const EXIT_MARGINAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_CONFIG: i32 = 65;
pub const EXIT_GUARD: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Guard(String),
    #[error(transparent)]
    Numeric(#[from] dissipstab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Guard(_) => EXIT_GUARD,
            CliError::Numeric(dissipstab::Error::InvalidConstraint(_) | dissipstab::Error::InvalidParameter(_)) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_SOFTWARE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
