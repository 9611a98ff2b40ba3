//! Exact elements of `(1/2)·ℤ`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A half-integer, stored as its doubled value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: BigInt,
}

impl HalfInt {
    pub fn from_twice(twice: impl Into<BigInt>) -> Self {
        HalfInt {
            twice: twice.into(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        HalfInt {
            twice: n.into() * 2,
        }
    }

    pub fn zero() -> Self {
        HalfInt {
            twice: BigInt::zero(),
        }
    }

    pub fn half() -> Self {
        HalfInt {
            twice: BigInt::one(),
        }
    }

    /// The doubled value `2·self`.
    pub fn twice(&self) -> &BigInt {
        &self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_even()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| &self.twice / 2)
    }

    pub fn is_negative(&self) -> bool {
        self.twice.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.twice.is_positive()
    }

    /// `self · k` for an integer `k`.
    pub fn scale(&self, k: &BigInt) -> HalfInt {
        HalfInt {
            twice: &self.twice * k,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_even() {
            write!(f, "{}", &self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `n` or `n/2`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("malformed half-integer {s:?}"));
        let int = |t: &str| -> Result<BigInt, Error> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(HalfInt::from_int(int(s)?)),
            Some((num, "2")) => Ok(HalfInt::from_twice(int(num)?)),
            Some(_) => Err(bad()),
        }
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl From<BigInt> for HalfInt {
    fn from(n: BigInt) -> Self {
        HalfInt::from_int(n)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl<'a> Add<&'a HalfInt> for &'a HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: &HalfInt) -> HalfInt {
        HalfInt {
            twice: &self.twice + &rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl<'a> Sub<&'a HalfInt> for &'a HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: &HalfInt) -> HalfInt {
        HalfInt {
            twice: &self.twice - &rhs.twice,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
