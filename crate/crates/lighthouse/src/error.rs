use std::fmt;

use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(lighthouse_core::Error),
    Io(String),
}

#[derive(Serialize)]
struct Report<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let r = Report {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        };
        serde_json::to_string(&r).unwrap_or_else(|_| String::from("{\"error\":\"unknown\"}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<lighthouse_core::Error> for CliError {
    fn from(e: lighthouse_core::Error) -> Self {
        match e {
            lighthouse_core::Error::Config(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
