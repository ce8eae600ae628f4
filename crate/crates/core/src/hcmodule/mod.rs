//! Harish-Chandra modules of `Mp₁(ℝ)`.
//!
//! The principal series `I(ε, ν)` has the K-type basis `φ_j`, `j ∈ ε + 2ℤ`,
//! with
//!
//! `H φ_j = j φ_j`, `X_± φ_j = ½(ν + 1 ± j) φ_{j±2}`, `C φ_j = (ν² − 1) φ_j`
//!
//! where `C = H² + 2X₊X₋ + 2X₋X₊`.

mod classify;
mod diagram;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::half::{factorial, HalfInteger};
use crate::qexp::Coefficient;
use crate::Rational;

pub use classify::{
    classify_form_module, ps_decompose, vanishing_transitions, ExactSequence, FormModule, KTypeSupport,
    ModuleClass, ModuleKind, StandardModule, SupportDirection, Transition,
};
pub use diagram::{ktype_diagram, Arrow, Diagram, DEFAULT_WINDOW};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HcError {
    #[error("K-type {j} does not lie in ε + 2ℤ for ε = {epsilon}")]
    NotInCoset { j: HalfInteger, epsilon: HalfInteger },
    #[error("weight error: {0}")]
    Weight(String),
    #[error("diagram window must be at least 4, got {0}")]
    Window(usize),
    #[error("r must be at least 1")]
    ZeroPower,
}

/// Exact scalars for the principal-series computations.
pub trait ExactScalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: Rational) -> Self;
    /// `Some` when the value is rational (required for decidable
    /// reducibility questions).
    fn to_rational(&self) -> Option<Rational>;
}

impl ExactScalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl ExactScalar for Coefficient {
    fn from_rational(r: Rational) -> Self {
        Coefficient::rational(r)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }
}

fn half_of<S: ExactScalar>(x: S) -> S {
    x * S::from_rational(Rational::new(BigInt::one(), BigInt::from(2)))
}

fn scalar<S: ExactScalar>(j: HalfInteger) -> S {
    S::from_rational(j.to_rational())
}

/// The generators of `U(𝔤)` used here, plus the Casimir element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum LieElement {
    H,
    Xplus,
    Xminus,
    Casimir,
}

/// A finite combination `Σ c_j φ_j` in `I(ε, ν)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrincipalSeriesVector<S> {
    epsilon: HalfInteger,
    nu: S,
    combo: BTreeMap<HalfInteger, S>,
}

impl<S: ExactScalar> PrincipalSeriesVector<S> {
    pub fn zero(epsilon: HalfInteger, nu: S) -> Self {
        PrincipalSeriesVector { epsilon: epsilon.rem_two(), nu, combo: BTreeMap::new() }
    }

    /// `φ_j`.
    pub fn basis(epsilon: HalfInteger, nu: S, j: HalfInteger) -> Result<Self, HcError> {
        PrincipalSeriesVector::zero(epsilon, nu).with_component(j, S::one())
    }

    /// Adds `c φ_j`.
    pub fn with_component(mut self, j: HalfInteger, c: S) -> Result<Self, HcError> {
        if !j.congruent_mod_two(self.epsilon) {
            return Err(HcError::NotInCoset { j, epsilon: self.epsilon });
        }
        self.add_raw(j, c);
        Ok(self)
    }

    fn add_raw(&mut self, j: HalfInteger, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.combo.remove(&j) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.combo.insert(j, sum);
        }
    }

    pub fn epsilon(&self) -> HalfInteger {
        self.epsilon
    }

    pub fn nu(&self) -> &S {
        &self.nu
    }

    pub fn component(&self, j: HalfInteger) -> S {
        self.combo.get(&j).cloned().unwrap_or_else(S::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&HalfInteger, &S)> {
        self.combo.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.combo.is_empty()
    }

    fn empty_like(&self) -> Self {
        PrincipalSeriesVector::zero(self.epsilon, self.nu.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.epsilon == other.epsilon && self.nu == other.nu, "vectors of different principal series");
        let mut out = self.clone();
        for (j, c) in &other.combo {
            out.add_raw(*j, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.empty_like();
        for (j, x) in &self.combo {
            out.add_raw(*j, x.clone() * c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }
}

/// Applies `x` to `v` by the formulas of the module docs.
pub fn ps_apply<S: ExactScalar>(x: LieElement, v: &PrincipalSeriesVector<S>) -> PrincipalSeriesVector<S> {
    let nu = v.nu.clone();
    let mut out = v.empty_like();
    let two = HalfInteger::from_int(2);
    for (&j, c) in &v.combo {
        let jj: S = scalar(j);
        match x {
            LieElement::H => out.add_raw(j, c.clone() * jj),
            LieElement::Xplus => {
                let f = half_of(nu.clone() + S::one() + jj);
                out.add_raw(j + two, c.clone() * f);
            }
            LieElement::Xminus => {
                let f = half_of(nu.clone() + S::one() - jj);
                out.add_raw(j - two, c.clone() * f);
            }
            LieElement::Casimir => out.add_raw(j, c.clone() * (nu.clone() * nu.clone() - S::one())),
        }
    }
    out
}

/// Applies a word; the rightmost letter acts first.
pub fn ps_apply_word<S: ExactScalar>(word: &[LieElement], v: &PrincipalSeriesVector<S>) -> PrincipalSeriesVector<S> {
    word.iter().rev().fold(v.clone(), |acc, x| ps_apply(*x, &acc))
}

/// `H² + 2X₊X₋ + 2X₋X₊`.
pub fn casimir_standard<S: ExactScalar>(v: &PrincipalSeriesVector<S>) -> PrincipalSeriesVector<S> {
    use LieElement::*;
    let two = S::from_rational(Rational::from_integer(2.into()));
    ps_apply_word(&[H, H], v)
        .add(&ps_apply_word(&[Xplus, Xminus], v).scale(&two))
        .add(&ps_apply_word(&[Xminus, Xplus], v).scale(&two))
}

/// `(H − 1)² + 4X₊X₋ − 1`.
pub fn casimir_lowered<S: ExactScalar>(v: &PrincipalSeriesVector<S>) -> PrincipalSeriesVector<S> {
    casimir_shifted(v, -S::one(), &[LieElement::Xplus, LieElement::Xminus])
}

/// `(H + 1)² + 4X₋X₊ − 1`.
pub fn casimir_raised<S: ExactScalar>(v: &PrincipalSeriesVector<S>) -> PrincipalSeriesVector<S> {
    casimir_shifted(v, S::one(), &[LieElement::Xminus, LieElement::Xplus])
}

fn casimir_shifted<S: ExactScalar>(v: &PrincipalSeriesVector<S>, shift: S, word: &[LieElement]) -> PrincipalSeriesVector<S> {
    let h_shift = ps_apply(LieElement::H, v).add(&v.scale(&shift));
    let mut h_shift_sq = v.empty_like();
    for (j, c) in h_shift.components() {
        let factor: S = scalar::<S>(*j) + shift.clone();
        h_shift_sq.add_raw(*j, c.clone() * factor);
    }
    let four = S::from_rational(Rational::from_integer(4.into()));
    h_shift_sq.add(&ps_apply_word(word, v).scale(&four)).sub(v)
}

/// Order of a composite `X_∓^r X_±^r`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// `X₋^r X₊^r`
    DownUp,
    /// `X₊^r X₋^r`
    UpDown,
}

/// The scalar by which `X₋^r X₊^r` (or `X₊^r X₋^r`) acts on `φ_j` in `I(ε, ν)`.
pub fn ps_compose<S: ExactScalar>(r: u32, j: HalfInteger, nu: &S, order: Order) -> Result<S, HcError> {
    if r == 0 {
        return Err(HcError::ZeroPower);
    }
    let mut acc = S::one();
    let jj: S = scalar(j);
    for t in 0..r as i64 {
        let t0: S = scalar(HalfInteger::from_int(2 * t));
        let t1: S = scalar(HalfInteger::from_int(2 * (t + 1)));
        let base = nu.clone() + S::one();
        let (first, second) = match order {
            // ½(ν+1+j+2t) · ½(ν+1−j−2(t+1))
            Order::DownUp => (base.clone() + jj.clone() + t0, base - jj.clone() - t1),
            // ½(ν+1−j+2t) · ½(ν+1+j−2(t+1))
            Order::UpDown => (base.clone() - jj.clone() + t0, base + jj.clone() - t1),
        };
        acc = acc * half_of(first) * half_of(second);
    }
    Ok(acc)
}

/// `(x)_r = x(x+1)⋯(x+r−1)`.
pub fn pochhammer(x: &Rational, r: u32) -> Rational {
    (0..r).fold(Rational::one(), |acc, t| acc * (x + Rational::from_integer(t.into())))
}

/// The eigenvalues `X₋^r X₊^r f̃_k = (−1)^r r! (k)_r f̃_k` and
/// `X₊^r X₋^r f̃_{k−2} = r! (k−1−r)_r f̃_{k−2}`.
pub fn lemma_eigenvalue(r: u32, k: HalfInteger, side: Order) -> Result<Rational, HcError> {
    if r == 0 {
        return Err(HcError::ZeroPower);
    }
    let fact = Rational::from_integer(factorial(r as u64));
    let k = k.to_rational();
    Ok(match side {
        Order::DownUp => {
            let sign = if r.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
            sign * fact * pochhammer(&k, r)
        }
        Order::UpDown => {
            let start = k - Rational::from_integer((1 + r as i64).into());
            fact * pochhammer(&start, r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn h(twice: i64) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    #[test]
    fn documented_actions() {
        let v = PrincipalSeriesVector::basis(h(3), rat(5, 2), h(3)).unwrap();
        let w = ps_apply(LieElement::Xplus, &v);
        assert_eq!(w.component(h(7)), rat(5, 2));
        for nu in [rat(1, 2), rat(-7, 2), rat(1, 3)] {
            let j = HalfInteger::from_rational(&(nu.clone() + int(1)));
            if let Some(j) = j {
                let v = PrincipalSeriesVector::basis(j, nu.clone(), j).unwrap();
                assert!(ps_apply(LieElement::Xminus, &v).is_zero());
            }
        }
        let v = PrincipalSeriesVector::basis(h(1), rat(1, 2), h(-7)).unwrap();
        let c = ps_apply(LieElement::Casimir, &v);
        assert_eq!(c.component(h(-7)), rat(-3, 4));
        assert_eq!(casimir_standard(&v), c);
    }

    #[test]
    fn coset_is_enforced() {
        assert!(PrincipalSeriesVector::basis(h(1), rat(1, 2), h(3)).is_err());
        assert!(PrincipalSeriesVector::basis(h(1), rat(1, 2), h(-3)).unwrap().component(h(-3)) == int(1));
    }

    #[test]
    fn compose_examples() {
        let k = h(3);
        let nu = k.to_rational() - int(1);
        assert_eq!(ps_compose(1, k, &nu, Order::DownUp).unwrap(), rat(-3, 2));
        assert_eq!(ps_compose(2, k, &nu, Order::DownUp).unwrap(), rat(15, 2));
        assert_eq!(lemma_eigenvalue(1, k, Order::DownUp).unwrap(), rat(-3, 2));
        assert_eq!(lemma_eigenvalue(1, k, Order::UpDown).unwrap(), rat(-1, 2));
        assert!(ps_compose(0, k, &nu, Order::DownUp).is_err());
    }

    #[test]
    fn compose_over_coefficient_ring() {
        // irrational ν = √2
        let nu = Coefficient::sqrt_int(2);
        let v = PrincipalSeriesVector::basis(h(1), nu.clone(), h(5)).unwrap();
        let word = [LieElement::Xminus, LieElement::Xminus, LieElement::Xplus, LieElement::Xplus];
        let direct = ps_apply_word(&word, &v).component(h(5));
        assert_eq!(direct, ps_compose(2, h(5), &nu, Order::DownUp).unwrap());
        assert_eq!(casimir_lowered(&v), casimir_raised(&v));
    }
}
