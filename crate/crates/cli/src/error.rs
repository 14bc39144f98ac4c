use std::fmt;

use cubifs::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Validation,
    Numerical,
    Io,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Usage,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Numerical,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Usage => exit::USAGE,
            Kind::Validation => exit::VALIDATION,
            Kind::Numerical => exit::NUMERICAL,
            Kind::Io => exit::IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e.root() {
            Error::Domain(_) => Kind::Usage,
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::MissingRating { .. }
            | Error::Csv(_) => Kind::Validation,
            Error::Estimation(_)
            | Error::DegenerateData(_)
            | Error::DegenerateInput(_)
            | Error::DegenerateNormalization(_)
            | Error::Numerical(_)
            | Error::IfsConsistency { .. } => Kind::Numerical,
            Error::Io(_) | Error::ForItem { .. } => Kind::Io,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            kind: Kind::Io,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
