//! Exact rational wrapper with a string-based serialized form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A `BigRational` that serializes as `{"num": "..", "den": ".."}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn int(n: i64) -> Exact {
        Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn big(n: BigInt) -> Exact {
        Exact(BigRational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Exact {
        Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Exact {
        Exact(BigRational::zero())
    }

    pub fn one() -> Exact {
        Exact(BigRational::one())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Exact {
        Exact(r)
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Exact {
        Exact::int(n)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exact {
    type Err = String;
    fn from_str(s: &str) -> Result<Exact, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n).map_err(|e| format!("bad numerator `{n}`: {e}"))?;
        let d = BigInt::from_str(d).map_err(|e| format!("bad denominator `{d}`: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Exact(BigRational::new(n, d)))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Exact, D::Error> {
        let w = Wire::deserialize(d)?;
        let num = BigInt::from_str(&w.num).map_err(D::Error::custom)?;
        let den = BigInt::from_str(&w.den).map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Exact(BigRational::new(num, den)))
    }
}

/// A named equality between two exact quantities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: Exact,
    pub rhs: Exact,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: Exact, rhs: Exact) -> Check {
        Check {
            name: name.into(),
            pass: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_form() {
        let x = Exact::ratio(-6, 4);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"num":"-3","den":"2"}"#);
        assert_eq!(serde_json::from_str::<Exact>(&s).unwrap(), x);
    }

    #[test]
    fn parse() {
        assert_eq!("3/32".parse::<Exact>().unwrap(), Exact::ratio(3, 32));
        assert_eq!("7".parse::<Exact>().unwrap(), Exact::int(7));
        assert!("1/0".parse::<Exact>().is_err());
    }
}
