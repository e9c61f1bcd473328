use alloc::string::String;
use core::fmt;

use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    InvalidArgument(String),
    /// An operation that needs a specific boundary kind got the other one.
    WrongGridKind {
        expected: &'static str,
        found: &'static str,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    DuplicateEntry {
        row: usize,
        col: usize,
    },
    /// `L(z)` (or a dense shifted matrix) is numerically singular, so `z`
    /// is an eigenvalue to working precision.
    NearSingular {
        shift: Complex64,
        pivot: usize,
    },
    /// Dense materialization refused because it would exceed the cap.
    TooLarge {
        order: usize,
        cap: usize,
    },
    ZeroVector,
    /// A constant-coefficient routine was handed a variable coefficient.
    NonConstantCoefficient,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::WrongGridKind { expected, found } => {
                write!(f, "expected a {expected} grid, got a {found} grid")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::DuplicateEntry { row, col } => {
                write!(f, "duplicate sparse entry at ({row}, {col})")
            }
            Error::NearSingular { shift, pivot } => write!(
                f,
                "shifted matrix is numerically singular at z = {}{:+}i (pivot {pivot}); z is a (near-)eigenvalue",
                shift.re, shift.im
            ),
            Error::TooLarge { order, cap } => write!(
                f,
                "dense materialization of order {order} exceeds the cap of {cap}; use the Arnoldi solver"
            ),
            Error::ZeroVector => f.write_str("zero vector"),
            Error::NonConstantCoefficient => {
                f.write_str("operation requires constant coefficients")
            }
        }
    }
}

impl core::error::Error for Error {}
