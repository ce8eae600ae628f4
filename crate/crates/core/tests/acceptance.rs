//! Acceptance gate: one line per criterion with its measured deviation,
//! tolerance and time budget. Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use mfhc::arith::{hurwitz, hurwitz_table, sigma1};
use mfhc::forms::{self, classify_example, Example, NumericOperator};
use mfhc::hcmodule::{
    casimir_lowered, casimir_raised, casimir_standard, classify_form_module, ktype_diagram, lemma_eigenvalue, ps_apply,
    ps_compose, ps_decompose, FormModule, KTypeSupport, LieElement, ModuleKind, Order, StandardModule, DEFAULT_WINDOW,
};
use mfhc::operators::{self, harmonic_gamma_atom};
use mfhc::qexp::{Atom, Window};
use mfhc::rational::{int, rat};
use mfhc::weil::{self, FiniteQuadraticModule};
use mfhc::{Coefficient, Complex64, Expansion, HalfInteger, MpElement, PsVector, PsVectorExact, Rational};
use rand::Rng;

use common::{h, matrix_distance, relative, DIAGRAM_CASES};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn exact(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }

    fn within(dev: f64, tol: f64, detail: &str) -> Self {
        Outcome { pass: dev <= tol, detail: format!("{detail}: max dev {dev:.2e} (tol {tol:.0e})") }
    }

    fn and(self, other: Outcome) -> Self {
        Outcome { pass: self.pass && other.pass, detail: format!("{}; {}", self.detail, other.detail) }
    }
}

fn ac1() -> Outcome {
    let mut count = 0;
    let mut ok = true;
    for tw in [-12, -8, -4, 0, 1, 3, 5, -1] {
        let k = h(tw);
        let mut atoms = vec![Atom::v_power(HalfInteger::ONE - k)];
        for n in -5..=5 {
            atoms.push(Atom::q_power(int(n)));
            if n != 0 {
                atoms.push(harmonic_gamma_atom(k, int(n)));
            }
        }
        for a in atoms {
            let f = Expansion::from_terms(Some(k), Window::ints(-5, 5), [(Coefficient::one(), a)]);
            ok &= operators::laplacian(&f).map(|d| d.is_empty()).unwrap_or(false);
            count += 1;
        }
    }
    Outcome::exact(ok, format!("Δ_k = 0 exactly on {count} atoms"))
}

fn ac2() -> Outcome {
    let mut r = common::rng(2);
    let mut failures = 0;
    for i in 0..200 {
        let f = common::harmonic(&mut r, HalfInteger::from_int(-2 * (i % 4)), 3);
        if operators::flip(&f).and_then(|g| operators::flip(&g)).map(|g| g != f).unwrap_or(true) {
            failures += 1;
        }
    }
    Outcome::exact(failures == 0, format!("F∘F = id on 200 expansions, {failures} failures"))
}

fn ac3() -> Outcome {
    let mut r = common::rng(3);
    let mut failures = 0;
    for i in 0..50 {
        let f = common::general(&mut r, HalfInteger::from_int(-(i % 4)), 5);
        if !matches!((operators::bol(&f), operators::bol_via_raising(&f)), (Ok(a), Ok(b)) if a == b) {
            failures += 1;
        }
    }
    Outcome::exact(failures == 0, format!("D^{{1−k}} = (−4π)^{{k−1}} R^{{1−k}} on 50 expansions, {failures} failures"))
}

fn ac4() -> Outcome {
    let mut r = common::rng(4);
    let mut checked = 0;
    let mut failures = 0;
    for _ in 0..25 {
        let k = h(2 * r.gen_range(-40..=40) + 1);
        let nu = k.to_rational() - int(1);
        for n in 1..=20 {
            let up = ps_compose(n, k, &nu, Order::DownUp).ok();
            let down = ps_compose(n, k - h(4), &nu, Order::UpDown).ok();
            let ok = up.is_some()
                && up == lemma_eigenvalue(n, k, Order::DownUp).ok()
                && down.is_some()
                && down == lemma_eigenvalue(n, k, Order::UpDown).ok();
            checked += 2;
            failures += usize::from(!ok);
        }
    }
    Outcome::exact(failures == 0, format!("{checked} eigenvalues at ν = k−1, r ≤ 20, {failures} failures"))
}

fn ac5() -> Outcome {
    let mut r = common::rng(5);
    let mut ok = true;
    let mut vectors = 0;
    for (eps, nu) in [(h(1), rat(1, 3)), (h(3), rat(-5, 2)), (h(1), rat(1, 2)), (h(0), rat(2, 5)), (h(2), rat(-7, 3))] {
        for _ in 0..10 {
            let mut v = PsVector::zero(eps, nu.clone());
            for _ in 0..4 {
                let j = eps + h(4 * r.gen_range(-6..=6));
                v = v.with_component(j, rat(r.gen_range(-9..=9), r.gen_range(1..=5))).unwrap();
            }
            let c = casimir_standard(&v);
            ok &= c == casimir_lowered(&v) && c == casimir_raised(&v) && c == v.scale(&(&nu * &nu - int(1)));
            vectors += 1;
        }
    }
    for nu in [Coefficient::sqrt_int(2), Coefficient::pi_pow(HalfInteger::ONE)] {
        let v = PsVectorExact::basis(h(1), nu.clone(), h(5)).unwrap();
        ok &= casimir_standard(&v) == v.scale(&(nu.clone() * nu.clone() - Coefficient::one()));
        vectors += 1;
    }
    let mut modules = 0;
    for tw in [1, 3, -1, -3, 5, -7, 11, 17, -21] {
        let k = h(tw);
        let expected = {
            let a = k.to_rational() - int(1);
            &a * &a - int(1)
        };
        for lv in [true, false] {
            let class = classify_form_module(k, lv).unwrap();
            let m = FormModule::new(k, lv);
            let mut j = k - h(16);
            while j <= k + h(16) {
                if m.contains(j) {
                    let v = BTreeMap::from([(j, int(1))]);
                    let img = m.apply(LieElement::Casimir, &v);
                    ok &= img.len() == 1 && img.get(&j) == Some(&expected);
                }
                j = j + h(4);
            }
            ok &= class.casimir == Some(expected.clone());
            modules += 1;
        }
    }
    Outcome::exact(ok, format!("three Casimir forms on {vectors} vectors, (k−1)²−1 on {modules} modules"))
}

/// The closed subspace forced by a vanishing transition, read off from
/// `X_± φ_j` directly.
fn invariant_piece(eps: HalfInteger, nu: &Rational) -> Option<KTypeSupport> {
    let mut j = eps.rem_two() - HalfInteger::from_int(24);
    while j <= HalfInteger::from_int(24) {
        let v = PsVector::basis(eps, nu.clone(), j).unwrap();
        if ps_apply(LieElement::Xplus, &v).is_zero() {
            return Some(KTypeSupport::down(j));
        }
        if ps_apply(LieElement::Xminus, &v).is_zero() {
            return Some(KTypeSupport::up(j));
        }
        j = j + h(4);
    }
    None
}

fn decomposition_table() -> Outcome {
    let epsilons = [h(1), h(3), h(0), h(2)];
    let nus = [rat(-7, 2), rat(-5, 2), rat(-3, 2), rat(-1, 2), rat(1, 2), rat(3, 2), rat(5, 2), rat(1, 3), int(2), rat(-2, 5)];
    let mut failures = Vec::new();
    let mut reducible = 0;
    for eps in epsilons {
        for nu in &nus {
            let c = ps_decompose(eps, nu);
            let ok = match (&c.kind, invariant_piece(eps, nu)) {
                (ModuleKind::ReduciblePrincipal { .. }, Some(piece)) => {
                    reducible += 1;
                    c.exact_sequence.is_some_and(|s| {
                        let sub = s.sub.support();
                        let quot = s.quotient.support();
                        let mut j = eps.rem_two() - HalfInteger::from_int(24);
                        let mut same = true;
                        while j <= HalfInteger::from_int(24) {
                            same &= sub.contains(j) == piece.contains(j) && quot.contains(j) != sub.contains(j);
                            j = j + h(4);
                        }
                        same
                    })
                }
                (ModuleKind::IrreduciblePrincipal { .. }, None) => true,
                (ModuleKind::OutOfScope { .. }, _) => eps.is_integral() && nu.is_integer(),
                _ => false,
            };
            if !ok {
                failures.push(format!("I({eps}, {nu})"));
            }
        }
    }
    let seq = |eps: i64, nu: Rational| ps_decompose(h(eps), &nu).exact_sequence.map(|s| (s.sub, s.quotient));
    let displayed = seq(1, rat(1, 2)) == Some((StandardModule::DiscreteMinus(h(1)), StandardModule::DiscretePlus(h(-1))))
        && seq(1, rat(-1, 2)) == Some((StandardModule::DiscretePlus(h(-1)), StandardModule::DiscreteMinus(h(1))));
    Outcome::exact(
        failures.is_empty() && displayed,
        format!("40-case table ({reducible} reducible), {} mismatches {failures:?}", failures.len()),
    )
}

fn golden_diagrams() -> Outcome {
    let mut diagrams = Vec::new();
    for (name, tw, lv) in DIAGRAM_CASES {
        let d = classify_form_module(h(tw), lv).and_then(|m| ktype_diagram(&m, DEFAULT_WINDOW));
        diagrams.push((name.to_string(), d.ok()));
    }
    diagrams.push(("intro_e32star".into(), classify_example(Example::E32Star).ok().map(|x| x.1)));
    diagrams.push(("intro_e2star".into(), classify_example(Example::E2Star).ok().map(|x| x.1)));
    let mut mismatched = Vec::new();
    for (name, d) in &diagrams {
        let same = d.as_ref().is_some_and(|d| {
            let (ascii, json) = common::render(d);
            let read = |ext: &str| std::fs::read_to_string(common::golden_dir().join(format!("{name}.{ext}"))).ok();
            read("txt") == Some(ascii) && read("json") == Some(json)
        });
        if !same {
            mismatched.push(name.clone());
        }
    }
    Outcome::exact(mismatched.is_empty(), format!("{} diagrams byte-for-byte, mismatched {mismatched:?}", diagrams.len()))
}

fn ac6() -> Outcome {
    decomposition_table().and(golden_diagrams())
}

fn ac7() -> Outcome {
    let h0 = hurwitz(0) == rat(-1, 12);
    let table = hurwitz_table(400);
    let known = [(3, rat(1, 3)), (4, rat(1, 2)), (7, int(1)), (8, int(1)), (11, int(1)), (12, rat(4, 3)), (15, int(2)), (16, rat(3, 2)), (20, int(2)), (23, int(3))];
    let values = known.iter().all(|(d, v)| &table[*d] == v);
    let mut kh = true;
    for n in 1..=50i64 {
        let mut lhs = Rational::from_integer(0.into());
        let mut t = -(2.0 * (n as f64).sqrt()).floor() as i64;
        while t * t <= 4 * n {
            lhs += &table[(4 * n - t * t) as usize];
            t += 1;
        }
        let min_sum: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d.min(n / d)).sum();
        kh &= lhs == int(2 * sigma1(n).unwrap() as i64 - min_sum);
    }
    Outcome::exact(
        h0 && values && kh && table.len() == 401,
        format!("H(0) = −1/12: {h0}; table values: {values}; Kronecker–Hurwitz n ≤ 50: {kh}"),
    )
}

fn ac8() -> Outcome {
    let samples = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.5, 1.0),
        Complex64::new(-0.3, 1.2),
        Complex64::new(0.25, 1.5),
        Complex64::new(0.1, 1.05),
    ];
    let gammas = [[[1, 0], [4, 1]], [[3, -1], [4, -1]], [[1, 0], [-8, 1]], [[3, 1], [8, 3]]];
    let grid = forms::grid((-0.5, 0.5), (1.0, 2.0), 4);
    let mut outcome = Outcome::exact(true, "");
    let mut details = Vec::new();
    for delta in [-3, -4] {
        let Ok(f) = forms::shintani_rhs(delta, forms::DEFAULT_D_MAX, forms::DEFAULT_N_MAX) else {
            return Outcome::exact(false, format!("shintani_rhs({delta}) failed"));
        };
        let harmonic = operators::is_harmonic(&f).unwrap_or(false) && f.weight() == Some(h(3));
        let plus = f
            .terms()
            .filter(|(a, _)| a.is_holomorphic())
            .all(|(a, _)| a.q.is_integer() && !matches!(a.q.to_integer().to_string().parse::<i64>().unwrap().rem_euclid(4), 1 | 2));
        let transform = gammas
            .iter()
            .map(|g| forms::transformation_check(&f, *g, &samples).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let residual = forms::harmonicity_residual(&f, &grid).unwrap_or(f64::INFINITY);
        let pass = harmonic && plus && transform <= 1e-6 && residual <= 1e-4;
        outcome.pass &= pass;
        details.push(format!(
            "Δ={delta}: harmonic {harmonic}, plus-space {plus}, Γ₀(4) {transform:.2e} (tol 1e-6), FD Δ {residual:.2e} (tol 1e-4)"
        ));
    }
    outcome.detail = details.join("; ");
    outcome
}

fn ac9() -> Outcome {
    let mut worst = 0.0f64;
    let mut roots = Vec::new();
    for fqm in ["Z/2:1/4", "Z/3:1/3", "Z/4:1/8"] {
        let d = FiniteQuadraticModule::parse(fqm).unwrap();
        let report = weil::check_relations(&d, 1e-10);
        worst = worst.max(report.max_deviation());
        roots.push(report.sigma);
    }
    let eighth = roots == vec![Some(1), Some(2), Some(1)];
    Outcome::within(worst, 1e-10, "unitary, (ST)³ = S², S⁸ = I").and(Outcome::exact(eighth, format!("σ = e(−j/8) with j = {roots:?}")))
}

fn ac10() -> Outcome {
    let pi = std::f64::consts::PI;
    let z = MpElement::k_elem(pi);
    let central = MpElement::k_elem(2.0 * pi) == MpElement::minus_one()
        && MpElement::minus_one() != MpElement::identity()
        && MpElement::k_elem(4.0 * pi) == MpElement::identity()
        && z.pow(4) == MpElement::identity();
    let mut r = common::rng(10);
    let mut assoc = 0.0f64;
    let mut branches = true;
    for _ in 0..1000 {
        let (x, y, w) = (common::mp(&mut r), common::mp(&mut r), common::mp(&mut r));
        let a = x.multiply(&y).multiply(&w);
        let b = x.multiply(&y.multiply(&w));
        branches &= a.branch() == b.branch();
        assoc = assoc.max(matrix_distance(&a, &b));
    }
    let mut nmk = 0.0f64;
    for _ in 0..1000 {
        let x = common::mp(&mut r);
        let (n, m, k, p) = x.nmk_decompose();
        let back = n.multiply(&m).multiply(&k);
        branches &= back.branch() == x.branch() && p.a > 0.0;
        nmk = nmk.max(matrix_distance(&back, &x));
    }
    Outcome::exact(central && branches, format!("k(2π), k(4π), Z⁴: {central}; branch bits: {branches}"))
        .and(Outcome::within(assoc, 1e-12, "associativity on 1000 triples"))
        .and(Outcome::within(nmk, 1e-12, "nmk roundtrip on 1000 elements"))
}

fn apply(op: NumericOperator, f: &Expansion) -> Result<Expansion, operators::OperatorError> {
    match op {
        NumericOperator::Raise => operators::raise(f),
        NumericOperator::Lower => operators::lower(f),
        NumericOperator::Laplacian => operators::laplacian(f),
        NumericOperator::Xi => operators::xi(f),
        NumericOperator::D => Ok(operators::d_op(f)),
    }
}

/// Drops the terms of `f` that `op` annihilates exactly, so the relative
/// error is not measured against a cancelled output.
fn outside_kernel(op: NumericOperator, f: &Expansion) -> Expansion {
    let mut g = Expansion::zero(f.weight(), f.truncation().clone());
    for (atom, c) in f.terms() {
        let single = Expansion::from_terms(f.weight(), f.truncation().clone(), [(c.clone(), atom.clone())]);
        if apply(op, &single).map(|img| !img.is_empty()).unwrap_or(true) {
            g.add_term(c.clone(), atom.clone());
        }
    }
    g
}

fn ac11() -> Outcome {
    let mut r = common::rng(11);
    let ops = [NumericOperator::Raise, NumericOperator::Lower, NumericOperator::Laplacian, NumericOperator::Xi, NumericOperator::D];
    let mut worst = 0.0f64;
    let mut evaluations = 0;
    for tw in [1, 3, 5, -1, 0, -4, 4] {
        let f = common::general(&mut r, h(tw), 5);
        let taus: Vec<Complex64> = (0..20).map(|_| Complex64::new(r.gen_range(-0.5..0.5), r.gen_range(0.8..1.6))).collect();
        for op in ops {
            let g = outside_kernel(op, &f);
            let Ok(sym) = apply(op, &g) else {
                return Outcome::exact(false, format!("{op:?} failed at weight {}", h(tw)));
            };
            let step = if op == NumericOperator::Laplacian { 5e-4 } else { 2e-4 };
            for &tau in &taus {
                let dev = match (sym.eval_numeric::<f64>(tau), forms::operator_numeric(op, &g, tau, step)) {
                    (Ok(a), Ok(b)) => relative(a, b),
                    _ => f64::INFINITY,
                };
                worst = worst.max(dev);
                evaluations += 1;
            }
        }
    }
    Outcome::within(worst, 1e-6, &format!("R, L, Δ, ξ, D at 20 τ × 7 weights ({evaluations} comparisons), relative"))
}

/// `(label, check, budget in seconds)`.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1  termwise harmonicity", ac1, 1),
        ("AC2  flip involution", ac2, 5),
        ("AC3  Bol dual route", ac3, 5),
        ("AC4  lemma vs principal series", ac4, 1),
        ("AC5  Casimir", ac5, 1),
        ("AC6  decomposition golden tests", ac6, 1),
        ("AC7  Hurwitz class numbers", ac7, 10),
        ("AC8  Shintani identity", ac8, 60),
        ("AC9  Weil representation", ac9, 1),
        ("AC10 metaplectic double cover", ac10, 5),
        ("AC11 symbolic-numeric coherence", ac11, 30),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = outcome.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {name}: {} [{:.3}s of {budget}s]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
