//! Differential operators on expansions: `R_k`, `L_k`, `Δ_k`, `ξ_k`,
//! `D = (1/2πi)∂_τ`, Bol's operator `D^{1−k}` and the flipping operator.
//!
//! Operators that depend on the weight read it from the expansion and fail
//! with [`OperatorError::MissingWeight`] when none is declared.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::half::{factorial, HalfInteger};
use crate::qexp::{Atom, Coefficient, Expansion, GammaFactor, Gauss, QexpError, Window};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("the expansion has no declared weight")]
    MissingWeight,
    #[error("weight error: {0}")]
    Weight(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("weight 1 with a non-holomorphic part needs a log(v) atom, which is not supported")]
    WeightOne,
    #[error(transparent)]
    Qexp(#[from] QexpError),
}

fn weight_of(f: &Expansion) -> Result<HalfInteger, OperatorError> {
    let k = f.weight().ok_or(OperatorError::MissingWeight)?;
    if k == HalfInteger::ONE && !f.is_weakly_holomorphic() {
        return Err(OperatorError::WeightOne);
    }
    Ok(k)
}

fn gauss_i(im: i64) -> Coefficient {
    Coefficient::gauss(Gauss::new(Rational::zero(), Rational::from_integer(im.into())))
}

/// `R_k f = 2i ∂_τ f + k v^{−1} f`, of weight `k + 2`.
pub fn raise(f: &Expansion) -> Result<Expansion, OperatorError> {
    Ok(raise_at(f, weight_of(f)?))
}

fn raise_at(f: &Expansion, k: HalfInteger) -> Expansion {
    let out = f
        .d_tau()
        .scale(&gauss_i(2))
        .add(&f.mul_v(-HalfInteger::ONE).scale(&Coefficient::rational(k.to_rational())).with_weight(None));
    out.with_weight(Some(k + HalfInteger::from_int(2)))
}

/// `L_k f = −2i v² ∂_τ̄ f`, of weight `k − 2`.
pub fn lower(f: &Expansion) -> Result<Expansion, OperatorError> {
    Ok(lower_at(f, weight_of(f)?))
}

fn lower_at(f: &Expansion, k: HalfInteger) -> Expansion {
    let out = f.d_taubar().mul_v(HalfInteger::from_int(2)).scale(&gauss_i(-2));
    out.with_weight(Some(k - HalfInteger::from_int(2)))
}

/// `Δ_k = −R_{k−2} L_k`.
pub fn laplacian(f: &Expansion) -> Result<Expansion, OperatorError> {
    let k = weight_of(f)?;
    let two = HalfInteger::from_int(2);
    let lowered = lower_at(f, k);
    Ok(raise_at(&lowered, k - two).neg().with_weight(Some(k)))
}

/// `ξ_k f = 2i v^k conj(∂_τ̄ f)`, of weight `2 − k`.
pub fn xi(f: &Expansion) -> Result<Expansion, OperatorError> {
    let k = weight_of(f)?;
    let out = f.d_taubar().conjugate()?.mul_v(k).scale(&gauss_i(2));
    Ok(out.with_weight(Some(HalfInteger::from_int(2) - k)))
}

/// `(1/2πi)` as an exact coefficient.
fn inv_two_pi_i() -> Coefficient {
    Coefficient::gauss(Gauss::new(Rational::zero(), Rational::new((-1).into(), 2.into())))
        * Coefficient::pi_pow(-HalfInteger::ONE)
}

/// `D f = (1/2πi) ∂_τ f`; carries no weight.
pub fn d_op(f: &Expansion) -> Expansion {
    f.d_tau().scale(&inv_two_pi_i())
}

fn bol_weight(f: &Expansion) -> Result<i64, OperatorError> {
    let k = weight_of(f)?;
    match k.as_integer() {
        Some(k) if k <= 0 => Ok(k),
        _ => Err(OperatorError::Weight(format!(
            "Bol's operator needs an integral weight k ≤ 0, got {k}"
        ))),
    }
}

/// `D^{1−k} f`, computed by iterated `∂_τ`; weight `2 − k`.
pub fn bol(f: &Expansion) -> Result<Expansion, OperatorError> {
    let k = bol_weight(f)?;
    let mut g = f.clone();
    for _ in 0..(1 - k) {
        g = d_op(&g);
    }
    Ok(g.with_weight(Some(HalfInteger::from_int(2 - k))))
}

/// `(−4π)^{k−1} R_{−k} ∘ ⋯ ∘ R_{k+2} ∘ R_k f`; equal to [`bol`].
pub fn bol_via_raising(f: &Expansion) -> Result<Expansion, OperatorError> {
    let k = bol_weight(f)?;
    let mut g = f.clone();
    for step in 0..(1 - k) {
        g = raise_at(&g, HalfInteger::from_int(k + 2 * step));
    }
    // (−4π)^{k−1} = (−1)^{k−1} 4^{k−1} π^{k−1}
    let sign = if (k - 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let four = Rational::from_integer(4.into());
    let mut power = Rational::one();
    for _ in 0..(1 - k) {
        power /= &four;
    }
    let c = Coefficient::rational(power * Rational::from_integer(sign.into()))
        * Coefficient::pi_pow(HalfInteger::from_int(k - 1));
    Ok(g.scale(&c))
}

/// The atom `Γ(1−k, −4πnv) q^n` carrying `c⁻(n)` in the harmonic expansion.
pub fn harmonic_gamma_atom(k: HalfInteger, n: Rational) -> Atom {
    assert!(!n.is_zero(), "the n = 0 non-holomorphic atom is v^(1-k)");
    Atom::new(HalfInteger::ZERO, n.clone(), Rational::zero(), vec![GammaFactor::new(HalfInteger::ONE - k, -n)])
}

/// The coefficients of an expansion of the harmonic shape
/// `Σ c⁺(n) qⁿ + c⁻(0) v^{1−k} + Σ_{n≠0} c⁻(n) Γ(1−k, −4πnv) qⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicParts {
    pub weight: HalfInteger,
    pub plus: BTreeMap<Rational, Coefficient>,
    pub minus_zero: Coefficient,
    pub minus: BTreeMap<Rational, Coefficient>,
}

impl HarmonicParts {
    pub fn new(weight: HalfInteger) -> Self {
        HarmonicParts { weight, plus: BTreeMap::new(), minus_zero: Coefficient::zero(), minus: BTreeMap::new() }
    }

    /// Reads the coefficients; any atom outside the shape is a
    /// [`OperatorError::Shape`].
    pub fn from_expansion(f: &Expansion) -> Result<Self, OperatorError> {
        let k = weight_of(f)?;
        if k == HalfInteger::ONE {
            return Err(OperatorError::WeightOne);
        }
        let mut parts = HarmonicParts::new(k);
        let s = HalfInteger::ONE - k;
        for (atom, c) in f.terms() {
            if atom.is_holomorphic() {
                parts.plus.insert(atom.q.clone(), c.clone());
                continue;
            }
            let no_q = atom.q.is_zero() && atom.qbar.is_zero();
            if atom.v == s && no_q && atom.gammas().is_empty() {
                parts.minus_zero = c.clone();
                continue;
            }
            if let [g] = atom.gammas() {
                if atom.v.is_zero() && atom.qbar.is_zero() && g.s == s && g.ell == -&atom.q {
                    parts.minus.insert(atom.q.clone(), c.clone());
                    continue;
                }
            }
            return Err(OperatorError::Shape(format!(
                "atom v^{} q^{} q̄^{} with {} gamma factor(s) is not of harmonic shape for weight {k}",
                atom.v,
                atom.q,
                atom.qbar,
                atom.gammas().len()
            )));
        }
        Ok(parts)
    }

    pub fn to_expansion(&self, window: Window) -> Expansion {
        let k = self.weight;
        let mut e = Expansion::zero(Some(k), window);
        for (n, c) in &self.plus {
            e.add_term(c.clone(), Atom::q_power(n.clone()));
        }
        e.add_term(self.minus_zero.clone(), Atom::v_power(HalfInteger::ONE - k));
        for (n, c) in &self.minus {
            e.add_term(c.clone(), harmonic_gamma_atom(k, n.clone()));
        }
        e
    }
}

/// The flipping operator on harmonic expansions of integral weight `k ≤ 0`:
///
/// `F_k f = −conj(c⁻(0)) v^{1−k} − (−k)! Σ_{n≠0} conj(c⁻(−n)) qⁿ − conj(c⁺(0))
///  − (1/(−k)!) Σ_{n≠0} conj(c⁺(−n)) Γ(1−k, −4πnv) qⁿ`.
pub fn flip(f: &Expansion) -> Result<Expansion, OperatorError> {
    let k = weight_of(f)?;
    let kk = match k.as_integer() {
        Some(kk) if kk <= 0 => kk,
        _ => {
            return Err(OperatorError::Weight(format!(
                "the flipping operator needs an integral weight k ≤ 0, got {k}"
            )))
        }
    };
    let parts = HarmonicParts::from_expansion(f)?;
    let fact = Rational::from_integer(factorial((-kk) as u64));
    let mut out = HarmonicParts::new(k);
    out.minus_zero = -parts.minus_zero.conj();
    for (n, c) in &parts.minus {
        out.plus.insert(-n, -c.conj().scale(&fact));
    }
    for (n, c) in &parts.plus {
        if n.is_zero() {
            out.plus.insert(n.clone(), -c.conj());
        } else {
            out.minus.insert(-n, -c.conj().scale(&fact.recip()));
        }
    }
    let w = f.truncation();
    Ok(out.to_expansion(Window::new(-&w.max, -&w.min)))
}

/// Every term is a pure `q`-power. The test is local to the expansion.
pub fn is_weakly_holomorphic(f: &Expansion) -> bool {
    f.is_weakly_holomorphic()
}

/// `Δ_k f` vanishes identically. The test is local to the expansion.
pub fn is_harmonic(f: &Expansion) -> Result<bool, OperatorError> {
    Ok(laplacian(f)?.is_empty())
}
