use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Lab(#[from] jacobi_lab::Error),

    #[error("{0}")]
    Acceptance(String),

    #[error("{0}")]
    Io(String),
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Lab(e) if e.is_numeric() => 3,
            CliError::Lab(_) => 2,
            CliError::Acceptance(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Lab(e) if e.is_numeric() => "numeric",
            CliError::Lab(_) => "config",
            CliError::Acceptance(_) => "acceptance",
        }
    }

    /// One-line JSON for stderr.
    pub fn diagnostic(&self) -> String {
        let d = Diagnostic { error: self.kind(), message: self.to_string(), exit_code: self.exit_code() };
        serde_json::to_string(&d).expect("diagnostic serializes")
    }
}
