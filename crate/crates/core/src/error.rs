use std::fmt;

use thiserror::Error;

/// Errors raised by the library. Mathematical property failures are never
/// errors; they surface as [`Finding`](crate::Finding)s instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed bit string or family/fragment text.
    #[error("{}", FormatMessage { line: *line, message })]
    Format {
        line: Option<usize>,
        message: String,
    },
    /// Arguments outside an operation's domain.
    #[error("{0}")]
    Usage(String),
    /// A search-space or cost guard was exceeded.
    #[error("{0}")]
    Capability(String),
    /// The family is not the image of any fragment at this pivot.
    /// `pivot` is a zero-based element index.
    #[error("no (k+1)-member contains pivot a{}", pivot + 1)]
    OutsideImage { pivot: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Error::Usage(message.into())
    }

    pub(crate) fn capability(message: impl Into<String>) -> Self {
        Error::Capability(message.into())
    }
}

struct FormatMessage<'a> {
    line: Option<usize>,
    message: &'a str,
}

impl fmt::Display for FormatMessage<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {}: {}", line, self.message),
            None => f.write_str(self.message),
        }
    }
}
