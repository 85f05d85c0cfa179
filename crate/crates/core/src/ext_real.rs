use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Arbitrary precision rational, always in lowest terms.
pub type Rational = BigRational;

/// The extended rational line: `-inf < every finite value < +inf`.
///
/// Variant order is the total order, so `Ord` is derived.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        ExtReal::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ExtReal::Finite(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(r) if r.is_zero())
    }

    /// Max-plus product. `-inf` absorbs everything below `+inf`;
    /// `(+inf) + (-inf)` has no value.
    pub fn checked_add(&self, other: &ExtReal) -> Result<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::UndefinedSum),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    /// Approximate value for display-only float paths.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl PartialEq<Rational> for ExtReal {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, ExtReal::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for ExtReal {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            ExtReal::NegInf => Ordering::Less,
            ExtReal::PosInf => Ordering::Greater,
            ExtReal::Finite(r) => r.cmp(other),
        })
    }
}

/// Parses `"p/q"` or a decimal integer, with optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `p/q` when the denominator is not one, otherwise the integer.
pub(crate) fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "∞" | "+∞" => Ok(ExtReal::PosInf),
            "-inf" | "-∞" => Ok(ExtReal::NegInf),
            other => parse_rational(other).map(ExtReal::Finite),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("inf"),
            ExtReal::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => s.parse().map_err(de::Error::custom),
            Raw::Int(n) => Ok(ExtReal::int(n)),
        }
    }
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_infinities_at_the_ends() {
        let mut v = vec![
            ExtReal::PosInf,
            ExtReal::int(3),
            ExtReal::NegInf,
            ExtReal::ratio(-7, 2),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ExtReal::NegInf,
                ExtReal::ratio(-7, 2),
                ExtReal::int(3),
                ExtReal::PosInf
            ]
        );
    }

    #[test]
    fn addition_absorbs_neg_inf() {
        assert_eq!(
            ExtReal::NegInf.checked_add(&ExtReal::int(5)),
            Ok(ExtReal::NegInf)
        );
        assert_eq!(
            ExtReal::int(5).checked_add(&ExtReal::NegInf),
            Ok(ExtReal::NegInf)
        );
        assert_eq!(
            ExtReal::PosInf.checked_add(&ExtReal::int(-5)),
            Ok(ExtReal::PosInf)
        );
        assert_eq!(
            ExtReal::PosInf.checked_add(&ExtReal::NegInf),
            Err(Error::UndefinedSum)
        );
        assert_eq!(
            ExtReal::ratio(1, 2).checked_add(&ExtReal::ratio(1, 3)),
            Ok(ExtReal::ratio(5, 6))
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/4".parse::<ExtReal>().unwrap(), ExtReal::ratio(3, 2));
        assert_eq!("-inf".parse::<ExtReal>().unwrap(), ExtReal::NegInf);
        assert_eq!("inf".parse::<ExtReal>().unwrap(), ExtReal::PosInf);
        assert_eq!(ExtReal::ratio(-4, 2).to_string(), "-2");
        assert_eq!(ExtReal::ratio(1, -3).to_string(), "-1/3");
        assert!("1/0".parse::<ExtReal>().is_err());
        assert!("abc".parse::<ExtReal>().is_err());
    }

    #[test]
    fn json_accepts_strings_and_integers() {
        let v: Vec<ExtReal> = serde_json::from_str(r#"["inf", 3, "-1/2"]"#).unwrap();
        assert_eq!(
            v,
            vec![ExtReal::PosInf, ExtReal::int(3), ExtReal::ratio(-1, 2)]
        );
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["inf","3","-1/2"]"#);
    }
}
