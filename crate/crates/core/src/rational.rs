//! Exact rational coefficients and their text/JSON encodings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coefficient field. Always stored in lowest terms with a positive denominator.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `num / den`, reduced.
///
/// Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(n: usize) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-2"`, `"1/4"` or `"-7/3"`.
pub fn parse_fraction(text: &str) -> Option<Q> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn fraction_string(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Fixed-point rendering for convenience columns. Never used in comparisons.
pub fn decimal_string(value: &Q, places: usize) -> String {
    match value.to_f64() {
        Some(v) => format!("{v:.places$}"),
        None => fraction_string(value),
    }
}

/// Smallest integer `>= num/den` for positive `den`.
pub fn ceil_div(num: u64, den: u64) -> u64 {
    num.div_ceil(den)
}

pub fn is_nonnegative(value: &Q) -> bool {
    !value.is_negative()
}

/// JSON wire form of an exact fraction: `{"num": "1", "den": "2"}`.
///
/// Both parts are strings so that no integer width is ever assumed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac(pub Q);

#[derive(Serialize, Deserialize)]
struct FracWire {
    num: String,
    den: String,
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FracWire {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frac {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = FracWire::deserialize(deserializer)?;
        let num = BigInt::from_str(&wire.num).map_err(D::Error::custom)?;
        let den = BigInt::from_str(&wire.den).map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Frac(Q::new(num, den)))
    }
}

impl From<Q> for Frac {
    fn from(value: Q) -> Self {
        Frac(value)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fraction_string(&self.0))
    }
}
