//! Exit codes and the errors that produce them.

use margulis_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_CERTIFICATION: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

/// A run that produced no report.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid configuration.
    Parse(String),
    /// The computation hit a tolerance band.
    Degenerate(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Degenerate(_) => EXIT_DEGENERATE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Degenerate(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate(_)
            | Error::UnsupportedClass { .. }
            | Error::ElementaryGroup(_)
            | Error::StepTooLarge(_)
            | Error::ConfigurationUnsupported(_) => Failure::Degenerate(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}
