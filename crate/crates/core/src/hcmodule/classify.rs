//! Reducibility of `I(ε, ν)` and the modules `ϖ(f, k)` generated by
//! harmonic forms of half-integral weight.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactScalar, HcError, LieElement};
use crate::half::HalfInteger;
use crate::rational::format_rational;
use crate::Rational;

/// Direction in which a K-type progression extends.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportDirection {
    /// `{b, b+2, b+4, …}`
    Up,
    /// `{…, b−4, b−2, b}`
    Down,
    /// `b + 2ℤ`
    Both,
}

/// An arithmetic progression of K-types with step 2.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KTypeSupport {
    pub boundary: HalfInteger,
    pub direction: SupportDirection,
}

impl KTypeSupport {
    pub fn up(from: HalfInteger) -> Self {
        KTypeSupport { boundary: from, direction: SupportDirection::Up }
    }

    pub fn down(to: HalfInteger) -> Self {
        KTypeSupport { boundary: to, direction: SupportDirection::Down }
    }

    pub fn both(class: HalfInteger) -> Self {
        KTypeSupport { boundary: class.rem_two(), direction: SupportDirection::Both }
    }

    pub fn contains(&self, j: HalfInteger) -> bool {
        if !j.congruent_mod_two(self.boundary) {
            return false;
        }
        match self.direction {
            SupportDirection::Up => j >= self.boundary,
            SupportDirection::Down => j <= self.boundary,
            SupportDirection::Both => true,
        }
    }
}

impl fmt::Display for KTypeSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let two = HalfInteger::from_int(2);
        let b = self.boundary;
        match self.direction {
            SupportDirection::Up => write!(f, "{{{}, {}, {}, …}}", b, b + two, b + two + two),
            SupportDirection::Down => write!(f, "{{…, {}, {}, {}}}", b - two - two, b - two, b),
            SupportDirection::Both => write!(f, "{} + 2ℤ", b),
        }
    }
}

/// The irreducible pieces `ϖ⁺(ν)` and `ϖ⁻(ν)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum StandardModule {
    /// K-types `{ν+1, ν+3, …}`
    DiscretePlus(HalfInteger),
    /// K-types `{…, −ν−3, −ν−1}`
    DiscreteMinus(HalfInteger),
}

impl StandardModule {
    pub fn support(&self) -> KTypeSupport {
        match *self {
            StandardModule::DiscretePlus(nu) => KTypeSupport::up(nu + HalfInteger::ONE),
            StandardModule::DiscreteMinus(nu) => KTypeSupport::down(-nu - HalfInteger::ONE),
        }
    }

    pub fn nu(&self) -> HalfInteger {
        match *self {
            StandardModule::DiscretePlus(nu) | StandardModule::DiscreteMinus(nu) => nu,
        }
    }
}

impl fmt::Display for StandardModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardModule::DiscretePlus(nu) => write!(f, "ϖ⁺({nu})"),
            StandardModule::DiscreteMinus(nu) => write!(f, "ϖ⁻({nu})"),
        }
    }
}

/// `0 → sub → M → quotient → 0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExactSequence {
    pub sub: StandardModule,
    pub quotient: StandardModule,
    /// Recorded from the classification; not computed.
    pub nonsplit: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModuleKind {
    IrreduciblePrincipal { epsilon: HalfInteger, nu: String },
    ReduciblePrincipal { epsilon: HalfInteger, nu: HalfInteger },
    DiscretePlus { nu: HalfInteger },
    DiscreteMinus { nu: HalfInteger },
    ExtensionMinusPlus { k: HalfInteger },
    /// Integral weights and integral `(ε, ν)`: handled by the known
    /// classification for `SL₂(ℝ)`, not here.
    OutOfScope { reason: String, case: Option<String> },
    /// `ν` is not rational, so reducibility cannot be decided exactly.
    NotDecidable { nu: String },
}

/// The transition drawn at the generator.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transition {
    Raise,
    Lower,
}

/// A classified module with its K-type support.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ModuleClass {
    pub kind: ModuleKind,
    pub support: Option<KTypeSupport>,
    pub exact_sequence: Option<ExactSequence>,
    pub generator: Option<HalfInteger>,
    /// Scalar by which the Casimir element acts, when rational.
    #[serde(with = "opt_rational")]
    pub casimir: Option<Rational>,
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

impl ModuleClass {
    fn bare(kind: ModuleKind) -> Self {
        ModuleClass { kind, support: None, exact_sequence: None, generator: None, casimir: None }
    }

    /// Marker for an integral-weight module, with optional case label and
    /// K-type data for the diagram.
    pub fn integral_weight(k: HalfInteger, case: Option<&str>, support: Option<KTypeSupport>) -> Self {
        let mut m = ModuleClass::bare(ModuleKind::OutOfScope {
            reason: format!("integral weight {k}: see the classification of Harish-Chandra modules for SL₂(ℝ)"),
            case: case.map(str::to_string),
        });
        m.support = support;
        m.generator = Some(k);
        let k1 = k.to_rational() - Rational::one();
        m.casimir = Some(&k1 * &k1 - Rational::one());
        m
    }

    pub fn is_out_of_scope(&self) -> bool {
        matches!(self.kind, ModuleKind::OutOfScope { .. })
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModuleKind::IrreduciblePrincipal { epsilon, nu } => write!(f, "I({epsilon}, {nu}) irreducible"),
            ModuleKind::ReduciblePrincipal { .. } | ModuleKind::ExtensionMinusPlus { .. } => {
                let seq = self.exact_sequence.expect("reducible modules carry an exact sequence");
                let middle = match &self.kind {
                    ModuleKind::ReduciblePrincipal { epsilon, nu } => format!("I({epsilon}, {nu})"),
                    ModuleKind::ExtensionMinusPlus { k } => format!("ϖ(f, {k})"),
                    _ => unreachable!(),
                };
                write!(f, "0 → {} → {} → {} → 0", seq.sub, middle, seq.quotient)?;
                if seq.nonsplit {
                    write!(f, " (nonsplit)")?;
                }
                Ok(())
            }
            ModuleKind::DiscretePlus { nu } => write!(f, "{}", StandardModule::DiscretePlus(*nu)),
            ModuleKind::DiscreteMinus { nu } => write!(f, "{}", StandardModule::DiscreteMinus(*nu)),
            ModuleKind::OutOfScope { reason, case } => match case {
                Some(c) => write!(f, "out of scope (case {c}): {reason}"),
                None => write!(f, "out of scope: {reason}"),
            },
            ModuleKind::NotDecidable { nu } => write!(f, "not decidable for ν = {nu}"),
        }
    }
}

/// Decomposes `I(ε, ν)`.
pub fn ps_decompose<S: ExactScalar>(epsilon: HalfInteger, nu: &S) -> ModuleClass {
    let epsilon = epsilon.rem_two();
    let Some(nu_q) = nu.to_rational() else {
        return ModuleClass::bare(ModuleKind::NotDecidable { nu: nu.to_string() });
    };
    let nu_half = HalfInteger::from_rational(&nu_q).filter(|h| !h.is_integral());
    let nu_int = nu_q.is_integer();
    let casimir = Some(&nu_q * &nu_q - Rational::one());
    let irreducible = |casimir: Option<Rational>| ModuleClass {
        support: Some(KTypeSupport::both(epsilon)),
        casimir,
        ..ModuleClass::bare(ModuleKind::IrreduciblePrincipal { epsilon, nu: format_rational(&nu_q) })
    };
    if epsilon.is_integral() {
        if nu_int {
            let mut m = ModuleClass::bare(ModuleKind::OutOfScope {
                reason: format!("I({epsilon}, {}) with integral ε and ν: see the SL₂(ℝ) theory", format_rational(&nu_q)),
                case: None,
            });
            m.casimir = casimir;
            return m;
        }
        return irreducible(casimir);
    }
    let Some(nu_h) = nu_half else {
        return irreducible(casimir);
    };
    let seq = if nu_h.congruent_mod_two(epsilon) {
        ExactSequence {
            sub: StandardModule::DiscreteMinus(nu_h),
            quotient: StandardModule::DiscretePlus(-nu_h),
            nonsplit: true,
        }
    } else {
        ExactSequence {
            sub: StandardModule::DiscretePlus(nu_h),
            quotient: StandardModule::DiscreteMinus(-nu_h),
            nonsplit: true,
        }
    };
    ModuleClass {
        kind: ModuleKind::ReduciblePrincipal { epsilon, nu: nu_h },
        support: Some(KTypeSupport::both(epsilon)),
        exact_sequence: Some(seq),
        generator: None,
        casimir,
    }
}

/// All `(j, transition)` with `|j| ≤ bound`, `j ∈ ε + 2ℤ` and `X_± φ_j = 0`.
pub fn vanishing_transitions(epsilon: HalfInteger, nu: &Rational, bound: i64) -> Vec<(HalfInteger, Transition)> {
    let mut out = Vec::new();
    let start = -HalfInteger::from_int(bound);
    let mut j = start;
    while !j.congruent_mod_two(epsilon) {
        j = j + HalfInteger::HALF;
    }
    let two = HalfInteger::from_int(2);
    while j <= HalfInteger::from_int(bound) {
        let jq = j.to_rational();
        if (nu + Rational::one() + &jq).is_zero() {
            out.push((j, Transition::Raise));
        }
        if (nu + Rational::one() - &jq).is_zero() {
            out.push((j, Transition::Lower));
        }
        j = j + two;
    }
    out
}

/// The module `ϖ(f, k)` for a harmonic form of strictly half-integral
/// weight `k`: `ϖ⁺(k−1)` if `L_k f = 0`, otherwise the nonsplit extension
/// `0 → ϖ⁻(1−k) → ϖ(f, k) → ϖ⁺(k−1) → 0`.
pub fn classify_form_module(k: HalfInteger, lowering_vanishes: bool) -> Result<ModuleClass, HcError> {
    if k.is_integral() {
        return Err(HcError::Weight(format!(
            "weight {k} is integral; integral weights follow the SL₂(ℝ) classification"
        )));
    }
    let one = HalfInteger::ONE;
    let k1 = k.to_rational() - Rational::one();
    let casimir = Some(&k1 * &k1 - Rational::one());
    if lowering_vanishes {
        return Ok(ModuleClass {
            kind: ModuleKind::DiscretePlus { nu: k - one },
            support: Some(KTypeSupport::up(k)),
            exact_sequence: None,
            generator: Some(k),
            casimir,
        });
    }
    Ok(ModuleClass {
        kind: ModuleKind::ExtensionMinusPlus { k },
        support: Some(KTypeSupport::both(k)),
        exact_sequence: Some(ExactSequence {
            sub: StandardModule::DiscreteMinus(one - k),
            quotient: StandardModule::DiscretePlus(k - one),
            nonsplit: true,
        }),
        generator: Some(k),
        casimir,
    })
}

/// A concrete model of `ϖ(f, k)` on the basis `e_j`, with `e_{k+2r} =
/// X₊^r f̃` and, when `L_k f ≠ 0`, `e_{k−2r} = X₋^r f̃`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormModule {
    pub k: HalfInteger,
    pub lowering_vanishes: bool,
}

impl FormModule {
    pub fn new(k: HalfInteger, lowering_vanishes: bool) -> Self {
        FormModule { k, lowering_vanishes }
    }

    fn steps(&self, j: HalfInteger) -> Option<i64> {
        let d = j - self.k;
        if d.twice() % 4 != 0 {
            return None;
        }
        let r = d.twice() / 4;
        if r < 0 && self.lowering_vanishes {
            return None;
        }
        Some(r)
    }

    pub fn contains(&self, j: HalfInteger) -> bool {
        self.steps(j).is_some()
    }

    /// Images of the basis vector `e_j` as a list of `(j', coefficient)`.
    pub fn apply_basis(&self, x: LieElement, j: HalfInteger) -> Vec<(HalfInteger, Rational)> {
        let Some(r) = self.steps(j) else { return Vec::new() };
        let k = self.k.to_rational();
        let q = |n: i64| Rational::from_integer(n.into());
        let two = HalfInteger::from_int(2);
        let keep = |v: Vec<(HalfInteger, Rational)>| v.into_iter().filter(|(j, c)| !c.is_zero() && self.contains(*j)).collect();
        match x {
            LieElement::H => keep(vec![(j, j.to_rational())]),
            LieElement::Casimir => {
                let k1 = &k - Rational::one();
                keep(vec![(j, &k1 * &k1 - Rational::one())])
            }
            LieElement::Xplus => {
                if r >= 0 {
                    keep(vec![(j + two, Rational::one())])
                } else {
                    // e_{k−2s−2} ↦ s(k−1−s) e_{k−2s}
                    let s = -r - 1;
                    keep(vec![(j + two, q(s) * (&k - q(1 + s)))])
                }
            }
            LieElement::Xminus => {
                if r > 0 {
                    // e_{k+2s+2} ↦ −(s+1)(k+s) e_{k+2s}
                    let s = r - 1;
                    keep(vec![(j - two, -(q(s + 1) * (&k + q(s))))])
                } else if self.lowering_vanishes {
                    Vec::new()
                } else {
                    keep(vec![(j - two, Rational::one())])
                }
            }
        }
    }

    /// Applies `x` to a vector `Σ c_j e_j`.
    pub fn apply(&self, x: LieElement, v: &BTreeMap<HalfInteger, Rational>) -> BTreeMap<HalfInteger, Rational> {
        let mut out: BTreeMap<HalfInteger, Rational> = BTreeMap::new();
        for (j, c) in v {
            for (j2, d) in self.apply_basis(x, *j) {
                *out.entry(j2).or_default() += c * d;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// The K-types reached from `e_k` by `X_±` inside `[lo, hi]`.
    pub fn reachable(&self, lo: HalfInteger, hi: HalfInteger) -> BTreeSet<HalfInteger> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.k];
        while let Some(j) = stack.pop() {
            if j < lo || j > hi || !seen.insert(j) {
                continue;
            }
            for x in [LieElement::Xplus, LieElement::Xminus] {
                for (j2, _) in self.apply_basis(x, j) {
                    stack.push(j2);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn h(twice: i64) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    #[test]
    fn documented_decompositions() {
        let m = ps_decompose(h(1), &rat(1, 2));
        let seq = m.exact_sequence.unwrap();
        assert_eq!(seq.sub, StandardModule::DiscreteMinus(h(1)));
        assert_eq!(seq.quotient, StandardModule::DiscretePlus(h(-1)));
        let m = ps_decompose(h(1), &rat(3, 2));
        let seq = m.exact_sequence.unwrap();
        assert_eq!(seq.sub, StandardModule::DiscretePlus(h(3)));
        assert_eq!(seq.quotient, StandardModule::DiscreteMinus(h(-3)));
        assert!(matches!(ps_decompose(h(1), &rat(1, 3)).kind, ModuleKind::IrreduciblePrincipal { .. }));
        assert!(matches!(ps_decompose(h(0), &rat(1, 3)).kind, ModuleKind::IrreduciblePrincipal { .. }));
        assert!(ps_decompose(h(2), &int(3)).is_out_of_scope());
        let irr = crate::qexp::Coefficient::sqrt_int(2);
        assert!(matches!(ps_decompose(h(1), &irr).kind, ModuleKind::NotDecidable { .. }));
    }

    #[test]
    fn classification_examples() {
        let m = classify_form_module(h(3), false).unwrap();
        let seq = m.exact_sequence.unwrap();
        assert_eq!(seq.sub, StandardModule::DiscreteMinus(h(-1)));
        assert_eq!(seq.quotient, StandardModule::DiscretePlus(h(1)));
        assert_eq!(m.casimir, Some(rat(-3, 4)));
        let m = classify_form_module(h(1), true).unwrap();
        assert_eq!(m.kind, ModuleKind::DiscretePlus { nu: h(-1) });
        assert_eq!(m.support, Some(KTypeSupport::up(h(1))));
        assert!(classify_form_module(HalfInteger::from_int(2), true).is_err());
    }

    #[test]
    fn engine_support_matches_classification() {
        for twice in [-15, -7, -3, -1, 1, 3, 5, 9, 13] {
            for lv in [true, false] {
                let k = h(twice);
                let m = classify_form_module(k, lv).unwrap();
                let engine = FormModule::new(k, lv);
                let (lo, hi) = (k - HalfInteger::from_int(12), k + HalfInteger::from_int(12));
                let reached = engine.reachable(lo, hi);
                let mut j = lo;
                while j <= hi {
                    assert_eq!(reached.contains(&j), m.support.unwrap().contains(j), "k={k} L=0:{lv} j={j}");
                    j = j + HalfInteger::from_int(2);
                }
            }
        }
    }

    #[test]
    fn unique_vanishing_transition() {
        for et in [1, 3] {
            for nt in (-41..=41).step_by(2) {
                let v = vanishing_transitions(h(et), &rat(nt, 2), 200);
                assert_eq!(v.len(), 1, "ε={et}/2 ν={nt}/2");
            }
        }
    }
}
