#![allow(dead_code)]

use mfhc::metaplectic::Sign;
use mfhc::operators::HarmonicParts;
use mfhc::qexp::{Atom, Basis, Coefficient, GammaFactor, Gauss, Window};
use mfhc::rational::{int, rat};
use mfhc::{Complex64, Expansion, HalfInteger, MpElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn h(twice: i64) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coefficient(r: &mut ChaCha8Rng) -> Coefficient {
    let re = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
    let im = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
    let basis = Basis { pi: h(r.gen_range(-2..=2)), radicand: [1, 1, 2, 3][r.gen_range(0..4)] };
    Coefficient::monomial(Gauss::new(re, im), basis)
}

/// A harmonic expansion `f⁺ + f⁻` with random principal parts.
pub fn harmonic(r: &mut ChaCha8Rng, k: HalfInteger, span: i64) -> Expansion {
    let mut p = HarmonicParts::new(k);
    for n in -span..=span {
        if r.gen_bool(0.7) {
            p.plus.insert(int(n), coefficient(r));
        }
        if n != 0 && r.gen_bool(0.7) {
            p.minus.insert(int(n), coefficient(r));
        }
    }
    if r.gen_bool(0.8) {
        p.minus_zero = coefficient(r);
    }
    p.to_expansion(Window::ints(-span, span))
}

/// A random combination of `v^a q^m q̄^{m'}` atoms, some with a gamma factor.
pub fn general(r: &mut ChaCha8Rng, k: HalfInteger, terms: usize) -> Expansion {
    let mut f = Expansion::zero(Some(k), Window::ints(-4, 4));
    for _ in 0..terms {
        let v = h(r.gen_range(-3..=3));
        let q = int(r.gen_range(0..=3));
        let qbar = int(r.gen_range(0..=2));
        let gammas = if r.gen_bool(0.3) { vec![GammaFactor::new(h(r.gen_range(-3..=3)), int(r.gen_range(1..=2)))] } else { vec![] };
        f.add_term(coefficient(r), Atom::new(v, q, qbar, gammas));
    }
    f
}

pub fn mp(r: &mut ChaCha8Rng) -> MpElement {
    let k = MpElement::k_elem(r.gen_range(0.0..4.0 * std::f64::consts::PI));
    let a: f64 = r.gen_range(0.3..3.0);
    let m = if r.gen_bool(0.5) {
        MpElement::m_elem(a, if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
    } else {
        MpElement::m_elem(-a, if r.gen_bool(0.5) { Sign::PlusI } else { Sign::MinusI })
    }
    .unwrap();
    k.multiply(&m).multiply(&MpElement::n_elem(r.gen_range(-3.0..3.0)))
}

pub fn matrix_distance(a: &MpElement, b: &MpElement) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a.matrix()[i][j] - b.matrix()[i][j]).abs());
        }
    }
    worst
}

pub fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// `(golden file stem, 2k, L_k f = 0)` for the eight weight cases.
pub const DIAGRAM_CASES: [(&str, i64, bool); 8] = [
    ("k5_2_lower_zero", 5, true),
    ("k7_2_lower_zero", 7, true),
    ("k9_2_lower_nonzero", 9, false),
    ("k11_2_lower_nonzero", 11, false),
    ("k1_2_lower_zero", 1, true),
    ("km1_2_lower_zero", -1, true),
    ("km7_2_lower_nonzero", -7, false),
    ("km1_2_lower_nonzero", -1, false),
];

pub fn golden_dir() -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Renders a diagram as `(ascii, pretty json + newline)`.
pub fn render(d: &mfhc::hcmodule::Diagram) -> (String, String) {
    (d.to_ascii(), serde_json::to_string_pretty(&d.to_json()).unwrap() + "\n")
}
