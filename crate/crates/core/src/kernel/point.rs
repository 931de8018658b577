use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the rational circle Q/Z, stored as its reduced representative in `[0, 1)`.
///
/// The derived `Ord` is the order of representatives, i.e. the cut of the
/// circle at `0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint(BigRational);

/// Reduces a rational into `[0, 1)`.
pub fn frac(value: &BigRational) -> BigRational {
    value - value.floor()
}

impl RatPoint {
    pub fn zero() -> Self {
        RatPoint(BigRational::zero())
    }

    /// Builds `numer/denom mod 1`. Panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_ratio(&BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_ratio(value: &BigRational) -> Self {
        RatPoint(frac(value))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Approximate value, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(0.0)
    }

    /// The point `-x mod 1`.
    pub fn reflect(&self) -> Self {
        Self::from_ratio(&-self.0.clone())
    }

    /// The point `x + t mod 1`.
    pub fn shift(&self, t: &BigRational) -> Self {
        Self::from_ratio(&(&self.0 + t))
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational (not reduced mod 1).
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats an exact rational as `"p/q"` (or `"p"` when integral).
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl FromStr for RatPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ratio(s).map(|r| RatPoint::from_ratio(&r))
    }
}

impl Serialize for RatPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `gcd(|numer|, denom) == 1` and `0 <= value < 1`.
pub fn is_canonical(numer: &BigInt, denom: &BigInt) -> bool {
    denom.is_positive() && !numer.is_negative() && numer < denom && numer.gcd(denom).is_one()
}
