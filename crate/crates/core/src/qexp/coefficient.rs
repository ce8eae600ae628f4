//! The exact coefficient ring: `ℚ(i)`-linear combinations of `π^e · √d` with
//! `e ∈ ½ℤ` and `d` squarefree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FloatConst, One, Signed, Zero};

use crate::half::HalfInteger;
use crate::rational::{format_rational, squarefree_decomposition, to_f64};
use crate::Rational;

/// A Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gauss {
    pub re: Rational,
    pub im: Rational,
}

impl Gauss {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gauss { re, im: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gauss { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Gauss { re: &self.re * r, im: &self.im * r }
    }

    /// `i^n`.
    pub fn i_pow(n: i64) -> Self {
        let one = Rational::one();
        match n.rem_euclid(4) {
            0 => Gauss::real(one),
            1 => Gauss::new(Rational::zero(), one),
            2 => Gauss::real(-one),
            _ => Gauss::new(Rational::zero(), -one),
        }
    }
}

impl<'a> Add<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn add(self, rhs: &Gauss) -> Gauss {
        Gauss { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Mul<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn mul(self, rhs: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Basis element `π^pi · √radicand` of the coefficient ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Basis {
    pub pi: HalfInteger,
    pub radicand: u64,
}

impl Basis {
    pub const ONE: Basis = Basis { pi: HalfInteger::ZERO, radicand: 1 };
}

/// An exact scalar: a finite sum `Σ c · π^e · √d`, `c ∈ ℚ(i)`.
///
/// The representation is canonical: radicands are squarefree and no stored
/// coefficient is zero, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Coefficient {
    monomials: BTreeMap<Basis, Gauss>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::rational(Rational::one())
    }

    pub fn i() -> Self {
        Coefficient::gauss(Gauss::i_pow(1))
    }

    pub fn int(n: i64) -> Self {
        Coefficient::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn rational(r: Rational) -> Self {
        Coefficient::gauss(Gauss::real(r))
    }

    pub fn gauss(g: Gauss) -> Self {
        Coefficient::monomial(g, Basis::ONE)
    }

    /// `c · π^e · √d` for an arbitrary positive `d`; square factors of `d`
    /// are moved into the rational part.
    pub fn monomial(c: Gauss, basis: Basis) -> Self {
        assert!(basis.radicand > 0, "radicand must be positive");
        let mut out = Coefficient::zero();
        let (s, f) = squarefree_decomposition(basis.radicand);
        let c = c.scale(&Rational::from_integer(BigInt::from(s)));
        out.insert(Basis { pi: basis.pi, radicand: f }, c);
        out
    }

    /// `π^e`.
    pub fn pi_pow(e: HalfInteger) -> Self {
        Coefficient::monomial(Gauss::real(Rational::one()), Basis { pi: e, radicand: 1 })
    }

    /// `√n` for a positive integer `n`.
    pub fn sqrt_int(n: u64) -> Self {
        Coefficient::monomial(Gauss::real(Rational::one()), Basis { pi: HalfInteger::ZERO, radicand: n })
    }

    /// `√r` for a positive rational `r`.
    pub fn sqrt_rational(r: &Rational) -> Self {
        assert!(r.is_positive(), "square root of a non-positive rational");
        let p: u64 = r.numer().try_into().expect("numerator too large for a radicand");
        let q: u64 = r.denom().try_into().expect("denominator too large for a radicand");
        let pq = (p as u128 * q as u128).try_into().expect("radicand overflow");
        let inv_q = Rational::new(BigInt::one(), BigInt::from(q));
        Coefficient::monomial(
            Gauss::real(inv_q),
            Basis { pi: HalfInteger::ZERO, radicand: pq },
        )
    }

    /// `(4πℓ)^s` with the branch `(−1)^s := e^{iπs}` when `ℓ < 0`.
    pub fn four_pi_ell_pow(s: HalfInteger, ell: &Rational) -> Self {
        assert!(!ell.is_zero(), "(4π·0)^s is not an admissible atom constant");
        let base = Rational::from_integer(BigInt::from(4)) * ell.abs();
        let twice = s.twice();
        let int_part = twice.div_euclid(2);
        let mut out = Coefficient::rational(rational_pow(&base, int_part))
            * Coefficient::pi_pow(s);
        if twice.rem_euclid(2) == 1 {
            out = out * Coefficient::sqrt_rational(&base);
        }
        if ell.is_negative() {
            out = out * Coefficient::gauss(Gauss::i_pow(twice));
        }
        out
    }

    fn insert(&mut self, basis: Basis, c: Gauss) {
        if c.is_zero() {
            return;
        }
        let entry = self.monomials.entry(basis).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.monomials.remove(&basis);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Basis, &Gauss)> {
        self.monomials.iter()
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            monomials: self.monomials.iter().map(|(b, c)| (*b, c.conj())).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            monomials: self.monomials.iter().map(|(b, c)| (*b, c.scale(r))).collect(),
        }
    }

    /// Returns the rational value when the coefficient is a rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        match self.monomials.iter().next() {
            Some((b, c)) if self.monomials.len() == 1 && *b == Basis::ONE && c.im.is_zero() => {
                Some(c.re.clone())
            }
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        self.monomials.values().all(|c| c.im.is_zero())
    }

    /// Multiplicative inverse of a single monomial `c π^e √d`; `None` for
    /// zero or for sums of several monomials.
    pub fn inv(&self) -> Option<Self> {
        if self.monomials.len() != 1 {
            return None;
        }
        let (b, c) = self.monomials.iter().next()?;
        let c_inv = c.inv()?.scale(&Rational::new(BigInt::one(), BigInt::from(b.radicand)));
        Some(Coefficient::monomial(c_inv, Basis { pi: -b.pi, radicand: b.radicand }))
    }

    /// Integer power; negative exponents require an invertible monomial.
    pub fn pow(&self, n: i64) -> Option<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut out = Coefficient::one();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        Some(out)
    }

    pub fn to_complex<T: Float + FloatConst>(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (b, c) in &self.monomials {
            let factor = T::PI().powf(T::from(b.pi.to_f64()).unwrap())
                * T::from(b.radicand as f64).unwrap().sqrt();
            let z = Complex::new(T::from(to_f64(&c.re)).unwrap(), T::from(to_f64(&c.im)).unwrap());
            acc = acc + z * factor;
        }
        acc
    }
}

fn rational_pow(base: &Rational, n: i64) -> Rational {
    let mut out = Rational::one();
    for _ in 0..n.unsigned_abs() {
        out *= base;
    }
    if n < 0 {
        out.recip()
    } else {
        out
    }
}

impl<'a> Add<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (b, c) in &rhs.monomials {
            out.insert(*b, c.clone());
        }
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.scale(&-Rational::one())
    }
}

impl<'a> Sub<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (b1, c1) in &self.monomials {
            for (b2, c2) in &rhs.monomials {
                let prod = b1.radicand as u128 * b2.radicand as u128;
                let prod: u64 = prod.try_into().expect("radicand overflow");
                let (s, f) = squarefree_decomposition(prod);
                let c = (c1 * c2).scale(&Rational::from_integer(BigInt::from(s)));
                out.insert(Basis { pi: b1.pi + b2.pi, radicand: f }, c);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $m(self, rhs: Coefficient) -> Coefficient {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $m(self, rhs: &Coefficient) -> Coefficient {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Zero for Coefficient {
    fn zero() -> Self {
        Coefficient::zero()
    }
    fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }
}

impl One for Coefficient {
    fn one() -> Self {
        Coefficient::one()
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::rational(r)
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::int(n)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.monomials {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c.re.is_zero(), c.im.is_zero()) {
                (false, true) => write!(f, "{}", format_rational(&c.re))?,
                (true, false) => write!(f, "{}i", format_rational(&c.im))?,
                _ => write!(f, "({}+{}i)", format_rational(&c.re), format_rational(&c.im))?,
            }
            if !b.pi.is_zero() {
                write!(f, "·π^{}", b.pi)?;
            }
            if b.radicand != 1 {
                write!(f, "·√{}", b.radicand)?;
            }
        }
        Ok(())
    }
}
