//! Crate-wide error type.

use std::fmt;

/// Errors produced by space construction, model calibration, sampling and I/O.
#[derive(Debug)]
pub enum Error {
    /// A parameter violated its documented range or constraint.
    InvalidParameter(String),
    /// A node or agent index was outside `0..len`.
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    /// A dense allocation would exceed the configured memory cap.
    MemoryCapExceeded {
        required_bytes: u128,
        cap_bytes: u64,
    },
    /// Root bracketing failed; the distance distribution is degenerate.
    CalibrationFailed(String),
    /// Two inputs that must agree in size did not.
    DimensionMismatch(String),
    /// A degree sequence summed to an odd number.
    OddDegreeSum(u64),
    /// An operation received an empty input it cannot handle.
    EmptyInput(String),
    /// Malformed text in an input file.
    Parse(String),
    Io(std::io::Error),
    Csv(csv::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::MemoryCapExceeded {
                required_bytes,
                cap_bytes,
            } => write!(
                f,
                "dense allocation of {required_bytes} bytes exceeds memory cap of {cap_bytes} bytes"
            ),
            Error::CalibrationFailed(msg) => write!(f, "calibration failed: {msg}"),
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::OddDegreeSum(sum) => {
                write!(f, "degree sequence must sum to an even number, got {sum}")
            }
            Error::EmptyInput(msg) => write!(f, "empty input: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
            Error::Csv(e) => write!(f, "csv error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            Error::Csv(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
