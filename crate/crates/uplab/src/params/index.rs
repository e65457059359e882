//! Extended positive rationals used as Lebesgue exponents.
//!
//! Every admissibility condition in this crate is a strict or non-strict
//! comparison between rational expressions, so indices are kept exact:
//! a finite index is a reduced `Ratio<i64>`, and infinity is a distinguished
//! variant rather than a float sentinel.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

/// A Lebesgue exponent in `(0, ∞]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Index {
    Finite(Rational),
    Infinity,
}

impl Index {
    pub const INFINITY: Index = Index::Infinity;

    /// Builds a finite index, rejecting non-positive values.
    pub fn new(value: Rational) -> Result<Index> {
        if value.is_positive() {
            Ok(Index::Finite(value))
        } else {
            Err(Error::InvalidIndex(format!(
                "index must be positive, got {value}"
            )))
        }
    }

    pub fn from_int(value: i64) -> Result<Index> {
        Index::new(Rational::from_integer(value))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Index> {
        if den == 0 {
            return Err(Error::InvalidIndex("zero denominator".into()));
        }
        Index::new(Rational::new(num, den))
    }

    pub const fn is_finite(&self) -> bool {
        matches!(self, Index::Finite(_))
    }

    pub const fn is_infinite(&self) -> bool {
        matches!(self, Index::Infinity)
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Index::Finite(r) => Some(*r),
            Index::Infinity => None,
        }
    }

    /// `1/p`, with `1/∞ = 0`. Always finite and non-negative.
    pub fn recip(&self) -> Rational {
        match self {
            Index::Finite(r) => r.recip(),
            Index::Infinity => Rational::zero(),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Index::Finite(r) => rational_to_f64(*r),
            Index::Infinity => f64::INFINITY,
        }
    }

    /// `min(self, 2)`, the cap that appears in the admissibility conditions.
    pub fn min_with_two(&self) -> Index {
        Ord::min(*self, Index::Finite(Rational::from_integer(2)))
    }

    /// Multiplies by a positive rational factor (`∞ · c = ∞`).
    pub fn scale(&self, factor: Rational) -> Result<Index> {
        if !factor.is_positive() {
            return Err(Error::InvalidIndex(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(match self {
            Index::Finite(r) => Index::Finite(r * factor),
            Index::Infinity => Index::Infinity,
        })
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`; defined for `p ≥ 1`.
    pub fn conjugate(&self) -> Result<Index> {
        let one = Rational::from_integer(1);
        match self {
            Index::Infinity => Index::new(one),
            Index::Finite(r) if *r == one => Ok(Index::Infinity),
            Index::Finite(r) if *r > one => Index::new(r / (r - one)),
            Index::Finite(r) => Err(Error::InvalidIndex(format!(
                "conjugate requires p >= 1, got {r}"
            ))),
        }
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Index::Infinity, Index::Infinity) => Ordering::Equal,
            (Index::Infinity, Index::Finite(_)) => Ordering::Greater,
            (Index::Finite(_), Index::Infinity) => Ordering::Less,
            (Index::Finite(a), Index::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialEq<Rational> for Index {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Index::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for Index {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Index::Finite(r) => r.cmp(other),
            Index::Infinity => Ordering::Greater,
        })
    }
}

impl From<Rational> for Index {
    /// Panics on non-positive input; use [`Index::new`] for fallible paths.
    fn from(value: Rational) -> Self {
        Index::new(value).expect("index must be positive")
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Infinity => write!(f, "inf"),
            Index::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Index::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Index> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Index::Infinity);
        }
        Index::new(parse_rational(s)?)
    }
}

/// Parses an exact rational from `"p/q"`, an integer, or a finite decimal
/// (interpreted digit-wise, e.g. `"0.1" = 1/10`). Infinity is not a
/// rational; callers wanting `∞` go through [`Index::from_str`].
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
        return Err(Error::InvalidIndex(
            "infinity is not a rational value here".into(),
        ));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidIndex(format!("bad numerator in {t:?}")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidIndex(format!("bad denominator in {t:?}")))?;
        if d == 0 {
            return Err(Error::InvalidIndex(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidIndex(format!("bad decimal {t:?}")));
        }
        let negative = int.trim_start().starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" || int == "+" {
            0
        } else {
            int.parse()
                .map_err(|_| Error::InvalidIndex(format!("bad decimal {t:?}")))?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse()
                .map_err(|_| Error::InvalidIndex(format!("bad decimal {t:?}")))?
        };
        let signed_frac = if negative { -frac_part } else { frac_part };
        return Ok(Rational::new(whole * scale + signed_frac, scale));
    }
    let n: i64 = t
        .parse()
        .map_err(|_| Error::InvalidIndex(format!("cannot parse {t:?} as a rational")))?;
    Ok(Rational::from_integer(n))
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Index;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an index as a string (\"2\", \"4/3\", \"inf\") or a positive integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Index, E> {
                v.parse().map_err(de::Error::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Index, E> {
                Index::from_int(v as i64).map_err(de::Error::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Index, E> {
                Index::from_int(v).map_err(de::Error::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Index, E> {
                if v.fract() == 0.0 && v > 0.0 && v < 2f64.powi(53) {
                    Index::from_int(v as i64).map_err(de::Error::custom)
                } else {
                    Err(de::Error::custom(
                        "write fractional indices as strings like \"4/3\" to keep them exact",
                    ))
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Serde adapter for `Ratio<i64>` fields: accepts the same forms as
/// [`parse_rational`] and serializes back as a string.
pub mod ratio_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Rational,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        if value.is_integer() {
            serializer.serialize_str(&value.numer().to_string())
        } else {
            serializer.serialize_str(&format!("{}/{}", value.numer(), value.denom()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Rational, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a string (\"1/2\") or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
                parse_rational(v).map_err(de::Error::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
                Ok(Rational::from_integer(v as i64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Rational, E> {
                if v.fract() == 0.0 && v.abs() < 2f64.powi(53) {
                    Ok(Rational::from_integer(v as i64))
                } else {
                    Err(de::Error::custom(
                        "write fractional values as strings like \"1/2\" to keep them exact",
                    ))
                }
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Lossless conversion; rationals in this crate have modest numerators.
pub fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn ordering_places_infinity_on_top() {
        let two = Index::from_int(2).unwrap();
        let half = Index::ratio(1, 2).unwrap();
        assert!(half < two);
        assert!(two < Index::INFINITY);
        assert_eq!(Index::INFINITY, Index::INFINITY);
        assert_eq!(two.min_with_two(), two);
        assert_eq!(Index::INFINITY.min_with_two(), two);
    }

    #[test]
    fn recip_of_infinity_is_zero() {
        assert_eq!(Index::INFINITY.recip(), Rational::zero());
        assert_eq!(Index::ratio(4, 3).unwrap().recip(), rat(3, 4));
    }

    #[test]
    fn conjugate_pairs() {
        let conj = |i: Index| i.conjugate().unwrap();
        assert_eq!(conj(Index::from_int(2).unwrap()), Index::from_int(2).unwrap());
        assert_eq!(conj(Index::from_int(1).unwrap()), Index::INFINITY);
        assert_eq!(conj(Index::INFINITY), Index::from_int(1).unwrap());
        assert_eq!(
            conj(Index::ratio(4, 3).unwrap()),
            Index::from_int(4).unwrap()
        );
        assert!(Index::ratio(1, 2).unwrap().conjugate().is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(Index::from_int(0).is_err());
        assert!(Index::ratio(-1, 2).is_err());
    }

    #[test]
    fn parses_strings_and_decimals() {
        assert_eq!("inf".parse::<Index>().unwrap(), Index::INFINITY);
        assert_eq!("4/3".parse::<Index>().unwrap(), Index::ratio(4, 3).unwrap());
        assert_eq!("2".parse::<Index>().unwrap(), Index::from_int(2).unwrap());
        assert_eq!(
            "0.5".parse::<Index>().unwrap(),
            Index::ratio(1, 2).unwrap()
        );
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert!("x".parse::<Index>().is_err());
    }

    #[test]
    fn serde_round_trip() {
        for s in ["\"inf\"", "\"4/3\"", "2", "\"0.5\""] {
            let idx: Index = serde_json::from_str(s).unwrap();
            let back = serde_json::to_string(&idx).unwrap();
            let again: Index = serde_json::from_str(&back).unwrap();
            assert_eq!(idx, again);
        }
        assert!(serde_json::from_str::<Index>("1.5").is_err());
    }
}
