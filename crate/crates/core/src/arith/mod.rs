//! Divisor sums, Hurwitz class numbers, special functions and the unary
//! theta series.

pub mod gamma;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FloatConst, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::Rational;

pub use gamma::{beta32, ei, gamma, inc_gamma, inc_gamma_half, inc_gamma_real, inc_gamma_scaled, w_kernel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("weight error: {0}")]
    Weight(String),
}

/// `σ₁(n) = Σ_{d | n} d`.
pub fn sigma1(n: i64) -> Result<u64, ArithError> {
    if n <= 0 {
        return Err(ArithError::Domain(format!("σ₁ needs n ≥ 1, got {n}")));
    }
    let n = n as u64;
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d;
            if d * d != n {
                total += n / d;
            }
        }
        d += 1;
    }
    Ok(total)
}

/// The reduced positive definite forms `[a, b, c]` of discriminant `−D`.
pub fn reduced_forms(d: u64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    if d == 0 || d % 4 == 1 || d % 4 == 2 {
        return out;
    }
    let d = d as i64;
    let mut a = 1i64;
    // a ≤ √(D/3) for reduced forms
    while 3 * a * a <= d {
        for b in -a..=a {
            if (b * b + d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + d) / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

/// The Hurwitz class number `H(D)`, with `H(0) = −1/12`.
pub fn hurwitz(d: u64) -> Rational {
    if d == 0 {
        return Rational::new(BigInt::from(-1), BigInt::from(12));
    }
    let mut total = Rational::zero();
    for (a, b, c) in reduced_forms(d) {
        let weight = if b == 0 && a == c {
            Rational::new(1.into(), 2.into())
        } else if a == b && b == c {
            Rational::new(1.into(), 3.into())
        } else {
            Rational::from_integer(1.into())
        };
        total += weight;
    }
    total
}

/// `[H(0), …, H(max)]`, computed in parallel.
pub fn hurwitz_table(max: u64) -> Vec<Rational> {
    (0..=max).into_par_iter().map(hurwitz).collect()
}

/// `θ(τ) = Σ_{n ∈ ℤ} e^{2πin²τ}`, truncated where the tail drops below
/// `10⁻¹⁴`.
pub fn theta_eval<T: Float + FloatConst>(tau: Complex<T>) -> Result<Complex<T>, ArithError> {
    let v = tau.im;
    if !(v > T::zero()) {
        return Err(ArithError::Domain("θ is evaluated for Im τ > 0".into()));
    }
    let two_pi = T::PI() + T::PI();
    let cutoff = (T::from(34.0).unwrap() / (two_pi * v)).sqrt().ceil() + T::from(2.0).unwrap();
    let n_max = cutoff.to_i64().unwrap_or(i64::MAX).min(1_000_000);
    let mut sum = Complex::new(T::one(), T::zero());
    let two = T::one() + T::one();
    for n in 1..=n_max {
        let n2 = T::from(n * n).unwrap();
        let term = Complex::from_polar((-two_pi * n2 * v).exp(), two_pi * n2 * tau.re);
        sum = sum + term * two;
    }
    Ok(sum)
}
