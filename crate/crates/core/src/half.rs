//! Half-integers `k ∈ ½ℤ`, stored as `2k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a half-integer (expected forms like 3/2, -1/2, 2)")]
pub struct ParseHalfIntegerError(pub String);

/// An element of `½ℤ`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice: 0 };
    pub const ONE: HalfInteger = HalfInteger { twice: 2 };
    pub const HALF: HalfInteger = HalfInteger { twice: 1 };

    /// The half-integer `twice / 2`.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }

    /// `Some(n)` when the value is the integer `n`.
    pub const fn as_integer(self) -> Option<i64> {
        if self.is_integral() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.twice), BigInt::from(2))
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Converts an exact rational, if it lies in `½ℤ`.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let twice = r * Rational::from_integer(BigInt::from(2));
        if twice.is_integer() {
            twice.to_integer().to_i64().map(Self::from_twice)
        } else {
            None
        }
    }

    /// Representative in `[0, 2)` of the class modulo `2ℤ`.
    pub fn rem_two(self) -> Self {
        HalfInteger::from_twice(self.twice.rem_euclid(4))
    }

    /// `self ≡ other (mod 2ℤ)`.
    pub fn congruent_mod_two(self, other: Self) -> bool {
        (self.twice - other.twice).rem_euclid(4) == 0
    }

    pub fn abs(self) -> Self {
        HalfInteger::from_twice(self.twice.abs())
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: Self) -> Self {
        HalfInteger::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: Self) -> Self {
        HalfInteger::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> Self {
        HalfInteger::from_twice(-self.twice)
    }
}

impl Mul<i64> for HalfInteger {
    type Output = HalfInteger;
    fn mul(self, rhs: i64) -> Self {
        HalfInteger::from_twice(self.twice * rhs)
    }
}

impl From<i64> for HalfInteger {
    fn from(n: i64) -> Self {
        HalfInteger::from_int(n)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = ParseHalfIntegerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseHalfIntegerError(s.to_string());
        let r = crate::rational::parse_rational(s).map_err(|_| err())?;
        HalfInteger::from_rational(&r).ok_or_else(err)
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInteger {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for HalfInteger {
    fn zero() -> Self {
        HalfInteger::ZERO
    }
    fn is_zero(&self) -> bool {
        self.twice == 0
    }
}

/// `n!` as an exact big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_is_consistent() {
        for twice in -9..9 {
            let h = HalfInteger::from_twice(twice);
            assert_eq!(h.is_integral(), twice % 2 == 0);
            assert_eq!(h.as_integer().is_some(), h.is_integral());
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/2".parse::<HalfInteger>().unwrap(), HalfInteger::from_twice(3));
        assert_eq!("-1/2".parse::<HalfInteger>().unwrap(), HalfInteger::from_twice(-1));
        assert_eq!("−1/2".parse::<HalfInteger>().unwrap(), HalfInteger::from_twice(-1));
        assert_eq!("2".parse::<HalfInteger>().unwrap(), HalfInteger::from_int(2));
        assert_eq!("4/2".parse::<HalfInteger>().unwrap(), HalfInteger::from_int(2));
        assert!("1.5".parse::<HalfInteger>().is_err());
        assert!("1/3".parse::<HalfInteger>().is_err());
        assert!("x".parse::<HalfInteger>().is_err());
        assert_eq!(HalfInteger::from_twice(-3).to_string(), "-3/2");
        assert_eq!(HalfInteger::from_int(-2).to_string(), "-2");
    }

    #[test]
    fn residues_mod_two() {
        assert_eq!(HalfInteger::from_twice(-1).rem_two(), HalfInteger::from_twice(3));
        assert!(HalfInteger::from_twice(5).congruent_mod_two(HalfInteger::from_twice(1)));
        assert!(!HalfInteger::from_twice(3).congruent_mod_two(HalfInteger::from_twice(1)));
    }
}
