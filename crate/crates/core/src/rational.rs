//! Parsing, formatting and small number-theoretic helpers for exact rationals.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as an exact rational (expected forms like 3, -1/2)")]
pub struct ParseRationalError(pub String);

/// Parses `"p"` or `"p/q"`. Accepts the Unicode minus sign; rejects decimals.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let cleaned = s.trim().replace('−', "-");
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
        None => (cleaned.clone(), "1".to_string()),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
    };
    if !valid(&num) || !valid(&den) {
        return Err(err());
    }
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Writes `n = s² · f` with `f` squarefree; returns `(s, f)`.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree decomposition of zero");
    let mut rest = n;
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= rest;
    (square, free)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && squarefree_decomposition(n).0 == 1
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Converts a rational to `f64` without overflowing intermediate integers.
pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down to avoid inf/inf
            let bits = r.numer().bits().max(r.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

/// Squarefree part test that also handles negative inputs by absolute value.
pub fn is_squarefree_i64(n: i64) -> bool {
    is_squarefree(n.unsigned_abs())
}
