//! Exact rationals and their extension by ±∞.

use alloc::string::String;
use core::fmt;
use core::ops::Neg;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`. Non-reduced input is accepted and normalized.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::Parse(alloc::format!("invalid rational {s:?}"));
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    Rational::from_str(s).map_err(|_| bad())
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    alloc::format!("{r}")
}

pub(crate) fn half() -> Rational {
    ratio(1, 2)
}

/// A rational or one of the two infinities. Ordered `-inf < finite < +inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "-inf" => Ok(ExtRational::NegInf),
            "+inf" | "inf" => Ok(ExtRational::PosInf),
            _ => parse_rational(s).map(ExtRational::Finite),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl Neg for ExtRational {
    type Output = ExtRational;

    fn neg(self) -> ExtRational {
        match self {
            ExtRational::NegInf => ExtRational::PosInf,
            ExtRational::PosInf => ExtRational::NegInf,
            ExtRational::Finite(r) => ExtRational::Finite(-r),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::PosInf => f.write_str("+inf"),
            ExtRational::Finite(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&ratio(3, -1)), "-3");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1 /2", "0.5", "1/2/3"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn extended_order() {
        let a = ExtRational::Finite(int(-1000));
        assert!(ExtRational::NegInf < a);
        assert!(a < ExtRational::Finite(int(3)));
        assert!(ExtRational::Finite(int(3)) < ExtRational::PosInf);
        assert_eq!(-ExtRational::NegInf, ExtRational::PosInf);
        assert_eq!(ExtRational::parse("-inf").unwrap().to_string(), "-inf");
        assert_eq!(ExtRational::parse("5/10").unwrap().to_string(), "1/2");
    }
}
