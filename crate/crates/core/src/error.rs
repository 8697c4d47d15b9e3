use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numeric kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Image dimensions, pixel buffer or gray range are inconsistent.
    InvalidImage(String),
    /// ROI center does not lie inside the image.
    RoiOutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },
    /// Parameter outside its allowed range.
    InvalidParameter(String),
    /// Input sequence was empty where at least one element is required.
    EmptyInput(&'static str),
    /// Offset with no in-bounds pixel pair.
    EmptyCooccurrence,
    /// Direction not in the supported run-length set.
    UnsupportedDirection(i32, i32),
    /// Dataset construction or subsetting failed.
    InvalidDataset(String),
    /// Query feature vector does not match the model's schema.
    SchemaMismatch { expected: usize, found: usize },
    /// A metric is undefined on the given population.
    UndefinedMetric(&'static str),
    /// Labels or scores do not line up.
    LengthMismatch { left: usize, right: usize },
    /// Class name not present in the class set.
    UnknownClass(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidImage(msg) => write!(f, "invalid image: {msg}"),
            Error::RoiOutOfBounds {
                x,
                y,
                width,
                height,
            } => {
                write!(f, "ROI center ({x}, {y}) outside {width}x{height} image")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::EmptyCooccurrence => f.write_str("empty co-occurrence"),
            Error::UnsupportedDirection(dx, dy) => {
                write!(f, "unsupported run-length direction ({dx}, {dy})")
            }
            Error::InvalidDataset(msg) => write!(f, "invalid dataset: {msg}"),
            Error::SchemaMismatch { expected, found } => {
                write!(
                    f,
                    "feature schema mismatch: expected {expected} features, found {found}"
                )
            }
            Error::UndefinedMetric(msg) => write!(f, "undefined metric: {msg}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::UnknownClass(c) => write!(f, "unknown class {c:?}"),
        }
    }
}

impl core::error::Error for Error {}
