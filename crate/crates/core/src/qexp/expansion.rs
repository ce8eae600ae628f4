//! Truncated real-analytic Fourier expansions.
//!
//! An expansion is a finite sum of atoms
//! `c · v^a · q^m · q̄^{m'} · Π Γ(s, 4πℓv)` where `q^m = e^{2πimτ}`,
//! `q̄^{m'} = e^{−2πim'τ̄}` and `v = Im τ`. The Fourier index of an atom is
//! `m − m'` (the frequency in `u = Re τ`); the truncation window constrains
//! it. Note `e^{−4πℓv} = q^ℓ q̄^ℓ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FloatConst, One, Signed, Zero};

use super::{Coefficient, Gauss, QexpError};
use crate::arith::gamma as special;
use crate::half::HalfInteger;
use crate::rational::{format_rational, to_f64};
use crate::Rational;

/// The factor `Γ(s, 4πℓv)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GammaFactor {
    pub s: HalfInteger,
    pub ell: Rational,
}

impl GammaFactor {
    pub fn new(s: HalfInteger, ell: Rational) -> Self {
        assert!(!ell.is_zero(), "Γ(s, 0·v) is not an atom");
        GammaFactor { s, ell }
    }
}

/// The monomial part `v^a q^m q̄^{m'} Π Γ(s, 4πℓv)` of a term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Atom {
    pub v: HalfInteger,
    pub q: Rational,
    pub qbar: Rational,
    /// Sorted; the multiset of gamma factors.
    gammas: Vec<GammaFactor>,
}

impl Atom {
    pub fn one() -> Self {
        Atom::default()
    }

    pub fn new(v: HalfInteger, q: Rational, qbar: Rational, mut gammas: Vec<GammaFactor>) -> Self {
        gammas.sort();
        Atom { v, q, qbar, gammas }
    }

    pub fn q_power(m: Rational) -> Self {
        Atom { q: m, ..Atom::default() }
    }

    pub fn v_power(a: HalfInteger) -> Self {
        Atom { v: a, ..Atom::default() }
    }

    pub fn gammas(&self) -> &[GammaFactor] {
        &self.gammas
    }

    /// `m − m'`.
    pub fn fourier_index(&self) -> Rational {
        &self.q - &self.qbar
    }

    /// A pure power `q^m` with `a = 0`, `m' = 0` and no gamma factors.
    pub fn is_holomorphic(&self) -> bool {
        self.v.is_zero() && self.qbar.is_zero() && self.gammas.is_empty()
    }

    fn with_v(&self, a: HalfInteger) -> Self {
        Atom { v: a, ..self.clone() }
    }

    fn conj(&self) -> Self {
        Atom { v: self.v, q: self.qbar.clone(), qbar: self.q.clone(), gammas: self.gammas.clone() }
    }
}

/// A single term `coeff · atom`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnalyticTerm {
    pub coeff: Coefficient,
    pub atom: Atom,
}

/// The closed interval of admissible Fourier indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Window {
    pub min: Rational,
    pub max: Rational,
}

impl Window {
    pub fn new(min: Rational, max: Rational) -> Self {
        assert!(min <= max, "empty truncation window");
        Window { min, max }
    }

    pub fn ints(min: i64, max: i64) -> Self {
        Window::new(Rational::from_integer(min.into()), Rational::from_integer(max.into()))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.min <= x && x <= &self.max
    }

    pub fn intersect(&self, other: &Window) -> Window {
        let min = (&self.min).max(&other.min).clone();
        let max = (&self.max).min(&other.max).clone();
        if min > max {
            // disjoint windows: keep an empty-looking degenerate window at min
            return Window { min: min.clone(), max: min };
        }
        Window { min, max }
    }

    fn negated(&self) -> Window {
        Window { min: -&self.max, max: -&self.min }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.min), format_rational(&self.max))
    }
}

/// A truncated expansion with an optional declared weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expansion {
    weight: Option<HalfInteger>,
    truncation: Window,
    terms: BTreeMap<Atom, Coefficient>,
}

impl Expansion {
    pub fn zero(weight: Option<HalfInteger>, truncation: Window) -> Self {
        Expansion { weight, truncation, terms: BTreeMap::new() }
    }

    /// Builds an expansion from terms; atoms outside the window are dropped.
    pub fn from_terms<I>(weight: Option<HalfInteger>, truncation: Window, terms: I) -> Self
    where
        I: IntoIterator<Item = (Coefficient, Atom)>,
    {
        let mut e = Expansion::zero(weight, truncation);
        for (c, a) in terms {
            e.add_term(c, a);
        }
        e
    }

    /// Adds `c · atom`, merging with a like term. Returns `false` (and does
    /// nothing) when the atom lies outside the truncation window.
    pub fn add_term(&mut self, c: Coefficient, atom: Atom) -> bool {
        if !self.truncation.contains(&atom.fourier_index()) {
            return false;
        }
        if c.is_zero() {
            return true;
        }
        match self.terms.get_mut(&atom) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&atom);
                }
            }
            None => {
                self.terms.insert(atom, c);
            }
        }
        true
    }

    pub fn weight(&self) -> Option<HalfInteger> {
        self.weight
    }

    pub fn with_weight(mut self, weight: Option<HalfInteger>) -> Self {
        self.weight = weight;
        self
    }

    pub fn truncation(&self) -> &Window {
        &self.truncation
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over the terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &Coefficient)> {
        self.terms.iter()
    }

    pub fn to_terms(&self) -> Vec<AnalyticTerm> {
        self.terms
            .iter()
            .map(|(a, c)| AnalyticTerm { coeff: c.clone(), atom: a.clone() })
            .collect()
    }

    pub fn coefficient(&self, atom: &Atom) -> Coefficient {
        self.terms.get(atom).cloned().unwrap_or_default()
    }

    /// The canonical form. Expansions are kept canonical by every
    /// constructor, so this is a clone.
    pub fn normalize(&self) -> Expansion {
        self.clone()
    }

    /// Returns `true` when every term is a pure `q`-power.
    pub fn is_weakly_holomorphic(&self) -> bool {
        self.terms.keys().all(Atom::is_holomorphic)
    }

    fn map_terms<F>(&self, weight: Option<HalfInteger>, window: Window, mut f: F) -> Expansion
    where
        F: FnMut(&Atom, &Coefficient, &mut Expansion),
    {
        let mut out = Expansion::zero(weight, window);
        for (a, c) in &self.terms {
            f(a, c, &mut out);
        }
        out
    }

    /// `c · self`; keeps the weight.
    pub fn scale(&self, c: &Coefficient) -> Expansion {
        self.map_terms(self.weight, self.truncation.clone(), |a, x, out| {
            out.add_term(x * c, a.clone());
        })
    }

    /// `v^a · self`; keeps the weight metadata unchanged.
    pub fn mul_v(&self, a: HalfInteger) -> Expansion {
        self.map_terms(self.weight, self.truncation.clone(), |atom, x, out| {
            out.add_term(x.clone(), atom.with_v(atom.v + a));
        })
    }

    /// Sum on the intersection of both windows. The weight is kept when
    /// both agree and cleared otherwise.
    pub fn add(&self, other: &Expansion) -> Expansion {
        let weight = if self.weight == other.weight { self.weight } else { None };
        let mut out = Expansion::zero(weight, self.truncation.intersect(&other.truncation));
        for (a, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(c.clone(), a.clone());
        }
        out
    }

    pub fn neg(&self) -> Expansion {
        self.scale(&-Coefficient::one())
    }

    pub fn sub(&self, other: &Expansion) -> Expansion {
        self.add(&other.neg())
    }

    /// `∂_τ`, symbolically; the result carries no weight.
    pub fn d_tau(&self) -> Expansion {
        self.derivative(false)
    }

    /// `∂_τ̄`, symbolically; the result carries no weight.
    pub fn d_taubar(&self) -> Expansion {
        self.derivative(true)
    }

    fn derivative(&self, bar: bool) -> Expansion {
        // ∂_τ v = 1/(2i) = −i/2 and ∂_τ̄ v = −1/(2i) = i/2
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let dv = Coefficient::gauss(Gauss::new(
            Rational::zero(),
            if bar { half.clone() } else { -half.clone() },
        ));
        let two_pi_i = Coefficient::gauss(Gauss::new(Rational::zero(), Rational::from_integer(2.into())))
            * Coefficient::pi_pow(HalfInteger::ONE);
        self.map_terms(None, self.truncation.clone(), |atom, c, out| {
            if !atom.v.is_zero() {
                let a = Coefficient::rational(atom.v.to_rational());
                out.add_term(c * &(a * dv.clone()), atom.with_v(atom.v - HalfInteger::ONE));
            }
            let exponent = if bar { -&atom.qbar } else { atom.q.clone() };
            if !exponent.is_zero() {
                out.add_term(c * &two_pi_i.scale(&exponent), atom.clone());
            }
            for (idx, g) in atom.gammas.iter().enumerate() {
                // d/dv Γ(s, 4πℓv) = −(4πℓ)^s v^{s−1} e^{−4πℓv}
                let factor = -(Coefficient::four_pi_ell_pow(g.s, &g.ell) * dv.clone());
                let mut gammas = atom.gammas.clone();
                gammas.remove(idx);
                let next = Atom {
                    v: atom.v + g.s - HalfInteger::ONE,
                    q: &atom.q + &g.ell,
                    qbar: &atom.qbar + &g.ell,
                    gammas,
                };
                out.add_term(c * &factor, next);
            }
        })
    }

    /// Complex conjugation `f ↦ f̄`; the window is reflected and the weight
    /// cleared.
    pub fn conjugate(&self) -> Result<Expansion, QexpError> {
        if let Some(g) = self.terms.keys().flat_map(|a| a.gammas.iter()).find(|g| g.ell.is_negative()) {
            return Err(QexpError::NonRealGammaBranch { s: g.s, ell: format_rational(&g.ell) });
        }
        Ok(self.map_terms(None, self.truncation.negated(), |a, c, out| {
            out.add_term(c.conj(), a.conj());
        }))
    }

    /// Removes every term whose Fourier index lies outside `window` and
    /// shrinks the truncation accordingly.
    pub fn restrict(&self, window: &Window) -> Expansion {
        let w = self.truncation.intersect(window);
        self.map_terms(self.weight, w, |a, c, out| {
            out.add_term(c.clone(), a.clone());
        })
    }

    /// Termwise numeric value at `τ`. The truncated tail is not estimated.
    pub fn eval_numeric<T: Float + FloatConst>(&self, tau: Complex<T>) -> Result<Complex<T>, QexpError> {
        let v = tau.im;
        if !(v > T::zero()) {
            return Err(QexpError::Domain("evaluation needs Im τ > 0".into()));
        }
        let two_pi = T::PI() + T::PI();
        let four_pi = two_pi + two_pi;
        let mut sum = Complex::new(T::zero(), T::zero());
        for (atom, c) in &self.terms {
            let m = T::from(to_f64(&atom.q)).unwrap();
            let mb = T::from(to_f64(&atom.qbar)).unwrap();
            let mut log_mag = -two_pi * v * (m + mb);
            let phase = two_pi * tau.re * (m - mb);
            let mut value = c.to_complex::<T>() * v.powf(T::from(atom.v.to_f64()).unwrap());
            for g in &atom.gammas {
                let s = T::from(g.s.to_f64()).unwrap();
                let x = four_pi * T::from(to_f64(&g.ell)).unwrap() * v;
                if x > T::zero() {
                    log_mag = log_mag - x;
                    value = value * special::inc_gamma_scaled(s, x)?;
                } else {
                    value = value * special::inc_gamma(s, x)?;
                }
            }
            if value.re.is_zero() && value.im.is_zero() {
                continue;
            }
            sum = sum + value * Complex::from_polar(log_mag.exp(), phase);
        }
        Ok(sum)
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !a.v.is_zero() {
                write!(f, "·v^{}", a.v)?;
            }
            if !a.q.is_zero() {
                write!(f, "·q^{}", format_rational(&a.q))?;
            }
            if !a.qbar.is_zero() {
                write!(f, "·q̄^{}", format_rational(&a.qbar))?;
            }
            for g in &a.gammas {
                write!(f, "·Γ({}, 4π·{}·v)", g.s, format_rational(&g.ell))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn h(twice: i64) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    fn single(c: Coefficient, a: Atom) -> Expansion {
        Expansion::from_terms(None, Window::ints(-20, 20), [(c, a)])
    }

    #[test]
    fn merge_and_zero_elimination() {
        let mut e = Expansion::zero(None, Window::ints(0, 5));
        e.add_term(Coefficient::one(), Atom::q_power(int(1)));
        e.add_term(Coefficient::one(), Atom::q_power(int(1)));
        assert_eq!(e.coefficient(&Atom::q_power(int(1))), Coefficient::int(2));
        let z = single(Coefficient::zero(), Atom::v_power(h(-2)));
        assert!(z.is_empty());
        assert!(!e.clone().add_term(Coefficient::one(), Atom::q_power(int(9))));
        assert_eq!(e.normalize(), e);
        let mut empty = Expansion::zero(None, Window::ints(-1, 1));
        empty.add_term(Coefficient::one(), Atom::q_power(int(1)));
        empty.add_term(-Coefficient::one(), Atom::q_power(int(1)));
        assert!(empty.is_empty());
    }

    #[test]
    fn derivative_examples() {
        let n = 3;
        let e = single(Coefficient::one(), Atom::q_power(int(n)));
        let d = e.d_tau();
        let expected = Coefficient::gauss(Gauss::new(int(0), int(2 * n))) * Coefficient::pi_pow(h(2));
        assert_eq!(d.coefficient(&Atom::q_power(int(n))), expected);
        assert!(e.d_taubar().is_empty());

        let inv_v = single(Coefficient::one(), Atom::v_power(h(-2)));
        let half_i = Coefficient::gauss(Gauss::new(int(0), rat(1, 2)));
        assert_eq!(inv_v.d_tau().coefficient(&Atom::v_power(h(-4))), half_i);
        assert_eq!(inv_v.d_taubar().coefficient(&Atom::v_power(h(-4))), -half_i);
    }

    #[test]
    fn mixed_partials_commute() {
        let e = Expansion::from_terms(
            None,
            Window::ints(-10, 10),
            [
                (Coefficient::int(3), Atom::new(h(3), int(2), int(-1), vec![])),
                (Coefficient::i(), Atom::new(h(-1), int(-1), int(0), vec![GammaFactor::new(h(-1), int(1))])),
                (
                    Coefficient::one(),
                    Atom::new(h(0), int(2), int(0), vec![GammaFactor::new(h(3), int(-2)), GammaFactor::new(h(1), rat(1, 2))]),
                ),
            ],
        );
        assert_eq!(e.d_tau().d_taubar(), e.d_taubar().d_tau());
    }

    #[test]
    fn conjugation_rules() {
        let e = single(Coefficient::i(), Atom::q_power(int(1)));
        let c = e.conjugate().unwrap();
        assert_eq!(c.coefficient(&Atom::new(h(0), int(0), int(1), vec![])), -Coefficient::i());
        assert_eq!(c.conjugate().unwrap(), e.with_weight(None));
        let real = single(Coefficient::one(), Atom::new(h(-2), int(0), int(0), vec![GammaFactor::new(h(6), int(1))]));
        assert_eq!(real.conjugate().unwrap(), real);
        let bad = single(Coefficient::one(), Atom::new(h(0), int(0), int(0), vec![GammaFactor::new(h(1), int(-1))]));
        assert!(matches!(bad.conjugate(), Err(QexpError::NonRealGammaBranch { .. })));
    }

    #[test]
    fn numeric_examples() {
        let one = single(Coefficient::one(), Atom::one());
        let z = one.eval_numeric(Complex::new(0.3, 0.7)).unwrap();
        assert!((z - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let q = single(Coefficient::one(), Atom::q_power(int(1)));
        let z = q.eval_numeric(Complex::new(0.0, 1.0)).unwrap();
        assert!((z.re - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-16 && z.im.abs() < 1e-16);
        assert!((z.re - 1.8674e-3).abs() < 1e-7);
        let inv_v = single(Coefficient::one(), Atom::v_power(h(-2)));
        assert!((inv_v.eval_numeric(Complex::new(0.0, 2.0)).unwrap().re - 0.5).abs() < 1e-15);
        assert!(one.eval_numeric(Complex::new(0.0, 0.0)).is_err());
        assert!(one.eval_numeric(Complex::new(0.0f32, 1.0)).is_ok());
    }

    #[test]
    fn exponential_identity() {
        // e^{−4πℓv} = q^ℓ q̄^ℓ
        let tau = Complex::new(0.37, 0.8);
        let e = single(Coefficient::one(), Atom::new(h(0), rat(1, 2), rat(1, 2), vec![]));
        let z = e.eval_numeric(tau).unwrap();
        assert!((z.re - (-2.0 * std::f64::consts::PI * 0.8).exp()).abs() < 1e-15 && z.im.abs() < 1e-15);
    }
}
