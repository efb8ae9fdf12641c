use alloc::string::String;
use core::fmt;

/// Errors reported by the simulation primitives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vector or matrix extent does not match what the operation expects.
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// An argument violates a documented precondition.
    InvalidArgument(String),
    /// The beam-group size does not divide the axis size, so no binning plan
    /// exists for this axis.
    Indivisible {
        axis: &'static str,
        size: usize,
        group: usize,
    },
    /// The axis size is not a power of the branching factor, so no
    /// hierarchical codebook exists for it.
    NotPowerOf {
        what: &'static str,
        size: usize,
        base: usize,
    },
    /// Both channel matrices are identically zero; no dominant path exists.
    DegenerateChannel,
    /// The requested success probability cannot be reached by adding rounds.
    UnreachableTarget,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension {
                what,
                expected,
                got,
            } => write!(f, "dimension mismatch for {what}: expected {expected}, got {got}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Indivisible { axis, size, group } => write!(
                f,
                "axis {axis}: group size {group} does not divide axis size {size}"
            ),
            Error::NotPowerOf { what, size, base } => {
                write!(f, "{what}: size {size} is not a power of {base}")
            }
            Error::DegenerateChannel => write!(f, "channel is identically zero"),
            Error::UnreachableTarget => {
                write!(f, "target probability is unreachable for this configuration")
            }
        }
    }
}

impl core::error::Error for Error {}
