//! The metaplectic double cover `Mp₁(ℝ)` of `SL₂(ℝ)`.
//!
//! Elements are pairs `(g, ω)` with `ω` holomorphic on `ℍ` and
//! `ω(τ)² = cτ + d`. Since `τ ↦ √(cτ + d)` (principal root) is holomorphic
//! on `ℍ`, `ω` is stored as a sign relative to it, with the convention
//! `√d := i√|d|` for `c = 0`, `d < 0`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Float, FloatConst, One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::rational::{format_rational, to_f64};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaplecticError {
    #[error("sign {s} does not fit a = {a}: use ±1 for a > 0 and ±i for a < 0")]
    SignDomain { a: String, s: Sign },
    #[error("determinant {0} is not 1")]
    Determinant(String),
    #[error("branch must be +1 or -1, got {0}")]
    Branch(i64),
    #[error("m(a, s) needs a ≠ 0")]
    ZeroScale,
}

/// Matrix entry types: exact rationals or floats.
pub trait MatrixEntry:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn as_f64(&self) -> f64;
    /// Allowed `|det − 1|`; zero for exact types.
    fn det_tolerance() -> f64;
    fn to_json(&self) -> Value;
}

impl MatrixEntry for f64 {
    fn as_f64(&self) -> f64 {
        *self
    }
    fn det_tolerance() -> f64 {
        1e-12
    }
    fn to_json(&self) -> Value {
        json!(self + 0.0)
    }
}

impl MatrixEntry for f32 {
    fn as_f64(&self) -> f64 {
        *self as f64
    }
    fn det_tolerance() -> f64 {
        1e-5
    }
    fn to_json(&self) -> Value {
        json!(*self as f64 + 0.0)
    }
}

impl MatrixEntry for Rational {
    fn as_f64(&self) -> f64 {
        to_f64(self)
    }
    fn det_tolerance() -> f64 {
        0.0
    }
    fn to_json(&self) -> Value {
        json!(format_rational(self))
    }
}

pub type Matrix<T> = [[T; 2]; 2];

/// The square-root choice of `m(a, s)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
            Sign::PlusI => "+i",
            Sign::MinusI => "-i",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" | "+1" | "+" => Ok(Sign::Plus),
            "-1" | "−1" | "-" => Ok(Sign::Minus),
            "i" | "+i" => Ok(Sign::PlusI),
            "-i" | "−i" => Ok(Sign::MinusI),
            other => Err(format!("unknown sign `{other}` (expected 1, -1, i, -i)")),
        }
    }
}

/// `(g, ω)` with `ω = branch · √(cτ + d)`.
#[derive(Clone, PartialEq, Debug)]
pub struct MetaplecticElement<T> {
    m: Matrix<T>,
    branch: i8,
}

fn principal_root(c: f64, d: f64, c_is_zero: bool, tau: Complex64) -> Complex64 {
    if c_is_zero {
        if d > 0.0 {
            Complex64::new(d.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-d).sqrt())
        }
    } else {
        (tau * c + d).sqrt()
    }
}

impl<T: MatrixEntry> MetaplecticElement<T> {
    pub fn identity() -> Self {
        MetaplecticElement { m: [[T::one(), T::zero()], [T::zero(), T::one()]], branch: 1 }
    }

    /// The central element `(I, −1)`.
    pub fn minus_one() -> Self {
        MetaplecticElement { m: Self::identity().m, branch: -1 }
    }

    pub fn new(m: Matrix<T>, branch: i64) -> Result<Self, MetaplecticError> {
        if branch != 1 && branch != -1 {
            return Err(MetaplecticError::Branch(branch));
        }
        let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
        let bad = if T::det_tolerance() == 0.0 {
            det != T::one()
        } else {
            (det.as_f64() - 1.0).abs() > T::det_tolerance()
        };
        if bad {
            return Err(MetaplecticError::Determinant(format!("{:?}", det)));
        }
        Ok(MetaplecticElement { m, branch: branch as i8 })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn branch(&self) -> i64 {
        self.branch as i64
    }

    /// `π(g, ω) = g`.
    pub fn project(&self) -> Matrix<T> {
        self.m.clone()
    }

    fn entries(&self) -> [f64; 4] {
        [self.m[0][0].as_f64(), self.m[0][1].as_f64(), self.m[1][0].as_f64(), self.m[1][1].as_f64()]
    }

    /// `ω(τ)`.
    pub fn omega(&self, tau: Complex64) -> Complex64 {
        let [_, _, c, d] = self.entries();
        principal_root(c, d, self.m[1][0].is_zero(), tau) * self.branch as f64
    }

    /// `gτ = (aτ + b)/(cτ + d)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        let [a, b, c, d] = self.entries();
        (tau * a + b) / (tau * c + d)
    }

    /// `(g, ω)(g', ω') = (gg', τ ↦ ω(g'τ) ω'(τ))`; the branch is fixed by
    /// comparing at `τ = i`.
    pub fn multiply(&self, other: &Self) -> Self {
        self.multiply_at(other, Complex64::new(0.0, 1.0))
    }

    /// [`multiply`](Self::multiply) with the comparison made at `tau`.
    pub fn multiply_at(&self, other: &Self, tau: Complex64) -> Self {
        let (x, y) = (&self.m, &other.m);
        let e = |i: usize, j: usize| x[i][0].clone() * y[0][j].clone() + x[i][1].clone() * y[1][j].clone();
        let m = [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]];
        let value = self.omega(other.act(tau)) * other.omega(tau);
        let principal = principal_root(m[1][0].as_f64(), m[1][1].as_f64(), m[1][0].is_zero(), tau);
        let branch = if (value - principal).norm() <= (value + principal).norm() { 1 } else { -1 };
        MetaplecticElement { m, branch }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m.clone();
        let m = [[d, -b], [-c, a]];
        let candidate = MetaplecticElement { m, branch: 1 };
        if candidate.multiply(self).branch == 1 {
            candidate
        } else {
            MetaplecticElement { branch: -1, ..candidate }
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.multiply(self))
    }

    /// `n(b) = ([[1, b], [0, 1]], 1)`.
    pub fn n_elem(b: T) -> Self {
        MetaplecticElement { m: [[T::one(), b], [T::zero(), T::one()]], branch: 1 }
    }

    /// `m(a, s) = (diag(a, a⁻¹), s·|a|^{−1/2})` with `s ∈ {±1}` for `a > 0`
    /// and `s ∈ {±i}` for `a < 0`.
    pub fn m_elem(a: T, s: Sign) -> Result<Self, MetaplecticError> {
        if a.is_zero() {
            return Err(MetaplecticError::ZeroScale);
        }
        let positive = a.as_f64() > 0.0;
        let branch = match (positive, s) {
            (true, Sign::Plus) | (false, Sign::PlusI) => 1,
            (true, Sign::Minus) | (false, Sign::MinusI) => -1,
            _ => return Err(MetaplecticError::SignDomain { a: format!("{:?}", a), s }),
        };
        let inv = T::one() / a.clone();
        Ok(MetaplecticElement { m: [[a, T::zero()], [T::zero(), inv]], branch })
    }

    /// `k(nπ/2)`, exactly.
    pub fn k_quarter_turns(n: i64) -> Self {
        let (cos, sin) = match n.rem_euclid(4) {
            0 => (T::one(), T::zero()),
            1 => (T::zero(), T::one()),
            2 => (-T::one(), T::zero()),
            _ => (T::zero(), -T::one()),
        };
        let m = [[cos.clone(), sin.clone()], [-sin, cos]];
        // ω_{k(θ)}(i) = e^{−iθ/2}
        let theta = n as f64 * std::f64::consts::FRAC_PI_2;
        let target = Complex64::from_polar(1.0, -theta / 2.0);
        let p = MetaplecticElement { m, branch: 1 };
        let branch = if (p.omega(Complex64::i()) - target).norm() < 1e-9 { 1 } else { -1 };
        MetaplecticElement { branch, ..p }
    }

    /// The generator `S = ([[0, −1], [1, 0]], √τ)`.
    pub fn s_elem() -> Self {
        Self::k_quarter_turns(-1)
    }

    /// The generator `T = ([[1, 1], [0, 1]], 1)`.
    pub fn t_elem() -> Self {
        Self::n_elem(T::one())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": [[self.m[0][0].to_json(), self.m[0][1].to_json()], [self.m[1][0].to_json(), self.m[1][1].to_json()]],
            "branch": self.branch,
        })
    }
}

impl<T: MatrixEntry + Float + FloatConst> MetaplecticElement<T> {
    /// `k(θ) = ([[cos θ, sin θ], [−sin θ, cos θ]], ω)` with
    /// `ω(i) = e^{−iθ/2}`; depends on `θ` modulo `4π`.
    pub fn k_elem(theta: T) -> Self {
        let snap = |x: T| if x.abs() < T::epsilon() * T::from(16.0).unwrap() { T::zero() } else { x };
        let (s, c) = theta.sin_cos();
        let (s, c) = (snap(s), snap(c));
        let m = [[c, s], [-s, c]];
        let target = Complex64::from_polar(1.0, -MatrixEntry::as_f64(&theta) / 2.0);
        let p = MetaplecticElement { m, branch: 1 };
        let branch = if (p.omega(Complex64::i()) - target).norm() <= (p.omega(Complex64::i()) + target).norm() { 1 } else { -1 };
        MetaplecticElement { branch, ..p }
    }

    /// Writes `x = n(b) · m(a, +1) · k(θ)` with `a > 0`, `θ ∈ [0, 4π)`.
    pub fn nmk_decompose(&self) -> (Self, Self, Self, NmkParams<T>) {
        let z = self.act(Complex64::i());
        let b = T::from(z.re).unwrap();
        let a = T::from(z.im.sqrt()).unwrap();
        let n = Self::n_elem(b);
        let m = Self::m_elem(a, Sign::Plus).expect("a > 0");
        // k-part matrix = (n m)^{-1} g; its first row is (cos θ, sin θ)
        let nm_inv = n.multiply(&m).inverse();
        let kmat = nm_inv.multiply(self);
        let two_pi = T::PI() + T::PI();
        let mut theta = kmat.m[0][1].atan2(kmat.m[0][0]);
        if theta < T::zero() {
            theta = theta + two_pi;
        }
        let mut k = Self::k_elem(theta);
        if n.multiply(&m).multiply(&k).branch != self.branch {
            theta = theta + two_pi;
            k = Self::k_elem(theta);
        }
        (n, m, k, NmkParams { b, a, theta })
    }

    /// Entrywise comparison with equal branches.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.branch == other.branch
            && (0..2).all(|i| (0..2).all(|j| (self.m[i][j] - other.m[i][j]).abs() <= tol))
    }
}

/// The parameters `(b, a, θ)` of an `n·m·k` decomposition.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct NmkParams<T> {
    pub b: T,
    pub a: T,
    pub theta: T,
}

impl<T: MatrixEntry> fmt::Display for MetaplecticElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}
