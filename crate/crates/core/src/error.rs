use alloc::string::String;
use core::fmt;

use crate::model::CoefId;
use crate::rational::{ExtRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Text that is not a valid rational or program component.
    Parse(String),
    /// `lo > hi` in an interval constructor.
    InvertedInterval { lo: Rational, hi: Rational },
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// Endpoint enumeration would need `2^nondegenerate` scenarios, more than `cap`.
    CapExceeded { nondegenerate: usize, cap: u64 },
    OutOfInterval { id: CoefId, value: Rational },
    MissingCoefficient(CoefId),
    UnknownCoefficient(CoefId),
    /// Variable index that should have been free but is sign-restricted.
    NotFree(usize),
    NotFixedMatrix,
    /// The worst-case bound formula is only valid once the program is known strongly feasible.
    UnguardedUpperBound,
    Malformed(String),
    Precondition(String),
    /// The enumeration oracle and the closed-form bounds disagree.
    RangeDiscrepancy {
        enumerated: (ExtRational, ExtRational),
        formula: (ExtRational, ExtRational),
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvertedInterval { lo, hi } => {
                write!(f, "interval lower bound {lo} exceeds upper bound {hi}")
            }
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected dimension {expected}, found {found}"),
            Error::CapExceeded { nondegenerate, cap } => write!(
                f,
                "2^{nondegenerate} endpoint scenarios exceed the enumeration cap {cap}"
            ),
            Error::OutOfInterval { id, value } => {
                write!(f, "value {value} for coefficient {id} lies outside its interval")
            }
            Error::MissingCoefficient(id) => write!(f, "no value assigned to coefficient {id}"),
            Error::UnknownCoefficient(id) => write!(f, "coefficient {id} is not part of the program"),
            Error::NotFree(j) => write!(f, "variable {j} is not free"),
            Error::NotFixedMatrix => f.write_str("program has interval constraint-matrix entries"),
            Error::UnguardedUpperBound => f.write_str(
                "worst-case bound formula needs established strong feasibility",
            ),
            Error::Malformed(msg) => write!(f, "malformed program: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::RangeDiscrepancy {
                enumerated,
                formula,
            } => write!(
                f,
                "enumeration gives [{}, {}] but the formulas give [{}, {}]",
                enumerated.0, enumerated.1, formula.0, formula.1
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
