use mfhc::arith::hurwitz;
use mfhc::forms::{self, NumericOperator};
use mfhc::hcmodule::{
    casimir_lowered, casimir_raised, casimir_standard, classify_form_module, lemma_eigenvalue, ps_compose, ps_decompose,
    FormModule, LieElement, ModuleKind, Order, StandardModule,
};
use mfhc::metaplectic::Sign;
use mfhc::operators::{self, harmonic_gamma_atom, HarmonicParts};
use mfhc::qexp::{Atom, Basis, Coefficient, GammaFactor, Gauss, Window};
use mfhc::rational::{int, rat};
use mfhc::weil::{self, FiniteQuadraticModule};
use mfhc::{Complex64, Expansion, HalfInteger, MpElement, PsVector, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Failure, Suite};

pub struct Options {
    pub delta: Option<i64>,
    pub dmax: u64,
    pub nmax: u64,
    pub negative_control: bool,
    pub tolerance: Option<f64>,
}

struct Check {
    suite: &'static str,
    name: String,
    deviation: Option<f64>,
    tolerance: Option<f64>,
    pass: bool,
}

struct Report<'a> {
    opts: &'a Options,
    checks: Vec<Check>,
}

impl<'a> Report<'a> {
    fn exact(&mut self, suite: &'static str, name: impl Into<String>, pass: bool) {
        self.checks.push(Check { suite, name: name.into(), deviation: None, tolerance: None, pass });
    }

    fn numeric(&mut self, suite: &'static str, name: impl Into<String>, deviation: f64, default_tol: f64) {
        let tol = self.opts.tolerance.unwrap_or(default_tol);
        self.checks.push(Check { suite, name: name.into(), deviation: Some(deviation), tolerance: Some(tol), pass: deviation <= tol });
    }
}

fn h(twice: i64) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x6d66_6863)
}

fn random_coefficient(r: &mut ChaCha8Rng) -> Coefficient {
    let re = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
    let im = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
    let basis = Basis { pi: h(r.gen_range(-2..=2)), radicand: [1, 1, 2, 3][r.gen_range(0..4)] };
    Coefficient::monomial(Gauss::new(re, im), basis)
}

fn random_harmonic(r: &mut ChaCha8Rng, k: HalfInteger, span: i64, growing: bool) -> Expansion {
    let mut p = HarmonicParts::new(k);
    for n in -span..=span {
        if r.gen_bool(0.7) {
            p.plus.insert(int(n), random_coefficient(r));
        }
        if n != 0 && (growing || n < 0) && r.gen_bool(0.7) {
            p.minus.insert(int(n), random_coefficient(r));
        }
    }
    if r.gen_bool(0.8) {
        p.minus_zero = random_coefficient(r);
    }
    p.to_expansion(Window::ints(-span, span))
}

fn random_general(r: &mut ChaCha8Rng, k: HalfInteger, terms: usize) -> Expansion {
    let mut f = Expansion::zero(Some(k), Window::ints(-4, 4));
    for _ in 0..terms {
        let v = h(r.gen_range(-3..=3));
        let q = int(r.gen_range(0..=3));
        let qbar = int(r.gen_range(0..=2));
        let gammas = if r.gen_bool(0.3) { vec![GammaFactor::new(h(r.gen_range(-3..=3)), int(r.gen_range(1..=2)))] } else { vec![] };
        f.add_term(random_coefficient(r), Atom::new(v, q, qbar, gammas));
    }
    f
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn operators_suite(rep: &mut Report) {
    const S: &str = "operators";
    let weights = [-12, -8, -4, 0, 1, 3, 5, -1];
    let mut ok = true;
    for &tw in &weights {
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
        }
    }
    rep.exact(S, "Δ_k kills qⁿ, v^{1−k}, Γ(1−k,−4πnv)qⁿ for 8 weights, |n| ≤ 5", ok);

    let mut r = rng();
    let mut ok = true;
    for i in 0..40 {
        let k = HalfInteger::from_int(-2 * (i % 4));
        let f = random_harmonic(&mut r, k, 3, true);
        ok &= operators::flip(&f).and_then(|g| operators::flip(&g)).map(|g| g == f).unwrap_or(false);
    }
    rep.exact(S, "F_k ∘ F_k = id on 40 random expansions, k ∈ {0,−2,−4,−6}", ok);

    let mut ok = true;
    for i in 0..20 {
        let k = HalfInteger::from_int(-(i % 4));
        let f = random_general(&mut r, k, 4);
        ok &= matches!((operators::bol(&f), operators::bol_via_raising(&f)), (Ok(a), Ok(b)) if a == b);
    }
    rep.exact(S, "D^{1−k} = (−4π)^{k−1} R^{1−k} on 20 random expansions, k ∈ {0,−1,−2,−3}", ok);

    let ops = [
        ("R", NumericOperator::Raise),
        ("L", NumericOperator::Lower),
        ("Δ", NumericOperator::Laplacian),
        ("ξ", NumericOperator::Xi),
        ("D", NumericOperator::D),
    ];
    for (label, op) in ops {
        let mut worst = 0.0f64;
        for &tw in &[1, 3, -4, 0, 5] {
            let f = random_general(&mut r, h(tw), 5);
            for _ in 0..4 {
                let tau = Complex64::new(r.gen_range(-0.5..0.5), r.gen_range(0.8..1.6));
                let sym = match op {
                    NumericOperator::Raise => operators::raise(&f),
                    NumericOperator::Lower => operators::lower(&f),
                    NumericOperator::Laplacian => operators::laplacian(&f),
                    NumericOperator::Xi => operators::xi(&f),
                    NumericOperator::D => Ok(operators::d_op(&f)),
                };
                let dev = match (sym.map(|g| g.eval_numeric::<f64>(tau)), forms::operator_numeric(op, &f, tau, 2e-4)) {
                    (Ok(Ok(a)), Ok(b)) => relative(a, b),
                    _ => f64::INFINITY,
                };
                worst = worst.max(dev);
            }
        }
        rep.numeric(S, format!("{label} matches its finite-difference oracle"), worst, 1e-6);
    }

    if rep.opts.negative_control {
        let f = random_general(&mut r, h(1), 4);
        let tau = Complex64::new(0.1, 1.1);
        let sym = operators::raise(&f).unwrap().eval_numeric::<f64>(tau).unwrap();
        let wrong = forms::operator_numeric(NumericOperator::Raise, &f.clone().with_weight(Some(h(3))), tau, 2e-4).unwrap();
        rep.numeric(S, "negative control: R_k against the oracle of weight k+1", relative(sym, wrong), 1e-6);
    }
}

fn hcmodule_suite(rep: &mut Report) {
    const S: &str = "hcmodule";
    let ks = [1, -1, 3, -3, 5, 7, -7, 9, 21, -41, 63];
    let lemma_ok = |shift: i64| {
        ks.iter().all(|&tw| {
            let k = h(tw);
            let nu = k.to_rational() - int(1 + shift);
            (1..=20).all(|r| {
                let up = ps_compose(r, k, &nu, Order::DownUp).ok() == lemma_eigenvalue(r, k, Order::DownUp).ok();
                let down = ps_compose(r, k - h(4), &nu, Order::UpDown).ok() == lemma_eigenvalue(r, k, Order::UpDown).ok();
                up && down
            })
        })
    };
    rep.exact(S, "lemma eigenvalues = principal-series composites at ν = k−1, r ≤ 20", lemma_ok(0));

    let mut ok = true;
    for (eps, nu) in [(h(1), rat(1, 3)), (h(3), rat(-5, 2)), (h(-1), rat(7, 2)), (h(0), rat(2, 5))] {
        let mut j = eps - h(8);
        while j <= eps + h(8) {
            let v = PsVector::basis(eps, nu.clone(), j).unwrap();
            let c = casimir_standard(&v);
            let expected = v.scale(&(&nu * &nu - int(1)));
            ok &= c == expected && casimir_lowered(&v) == c && casimir_raised(&v) == c;
            j = j + h(4);
        }
    }
    rep.exact(S, "the three forms of C agree and C = ν² − 1 on I(ε, ν)", ok);

    let mut ok = true;
    for tw in [1, 3, -1, -3, 5, -7, 11, 17] {
        let k = h(tw);
        for lv in [true, false] {
            let class = classify_form_module(k, lv).unwrap();
            let expected = &(k.to_rational() - int(1)) * &(k.to_rational() - int(1)) - int(1);
            let m = FormModule::new(k, lv);
            let mut e = std::collections::BTreeMap::new();
            e.insert(k, int(1));
            let image = m.apply(LieElement::Casimir, &e);
            ok &= class.casimir == Some(expected.clone()) && image.get(&k) == Some(&expected) && image.len() == 1;
        }
    }
    rep.exact(S, "C acts by (k−1)² − 1 on ϖ(f, k)", ok);

    let ses = |eps: i64, nu: Rational, sub: StandardModule, quot: StandardModule| {
        let c = ps_decompose(h(eps), &nu);
        matches!(c.kind, ModuleKind::ReduciblePrincipal { .. })
            && c.exact_sequence.map(|s| s.sub == sub && s.quotient == quot).unwrap_or(false)
    };
    let ok = ses(1, rat(5, 2), StandardModule::DiscreteMinus(h(5)), StandardModule::DiscretePlus(h(-5)))
        && ses(1, rat(1, 2), StandardModule::DiscreteMinus(h(1)), StandardModule::DiscretePlus(h(-1)))
        && ses(1, rat(-1, 2), StandardModule::DiscretePlus(h(-1)), StandardModule::DiscreteMinus(h(1)))
        && ses(3, rat(-1, 2), StandardModule::DiscreteMinus(h(-1)), StandardModule::DiscretePlus(h(1)))
        && matches!(ps_decompose(h(1), &rat(1, 3)).kind, ModuleKind::IrreduciblePrincipal { .. })
        && matches!(ps_decompose(h(0), &int(2)).kind, ModuleKind::OutOfScope { .. });
    rep.exact(S, "principal-series exact sequences and irreducibility", ok);

    let ok = [5, 7, 9, 11, 1, -1, -7].iter().all(|&tw| {
        let lv = tw > -1;
        let k = h(tw);
        let class = classify_form_module(k, lv).unwrap();
        let m = FormModule::new(k, lv);
        let (lo, hi) = (k - h(24), k + h(24));
        let support = class.support.unwrap();
        let reach = m.reachable(lo, hi);
        let mut j = lo;
        let mut same = true;
        while j <= hi {
            same &= reach.contains(&j) == support.contains(j);
            j = j + h(4);
        }
        same
    });
    rep.exact(S, "classified K-type supports match the module engine", ok);

    if rep.opts.negative_control {
        rep.exact(S, "negative control: lemma eigenvalues at ν = k−2", lemma_ok(1));
    }
}

fn weil_suite(rep: &mut Report) {
    const S: &str = "weil";
    let mut fixtures: Vec<FiniteQuadraticModule> =
        ["Z/2:1/4", "Z/3:1/3", "Z/4:1/8"].iter().map(|s| FiniteQuadraticModule::parse(s).unwrap()).collect();
    fixtures.push(FiniteQuadraticModule::parse("Z/2:1/4 + Z/4:1/8").unwrap());
    if rep.opts.negative_control {
        fixtures.push(FiniteQuadraticModule::from_values_unchecked(vec![3], vec![int(0), rat(1, 3), rat(1, 2)]).unwrap());
    }
    for d in &fixtures {
        let tol = rep.opts.tolerance.unwrap_or(1e-10);
        let report = weil::check_relations(d, tol);
        for (name, dev) in report.entries() {
            rep.numeric(S, format!("{d}: {name}"), dev, 1e-10);
        }
        rep.exact(S, format!("{d}: σ(D) is an eighth root of unity"), report.sigma.is_some());
    }
    let lattices: [(&str, Vec<Vec<i64>>); 3] =
        [("Z/2:1/4", vec![vec![2]]), ("Z/3:1/3", vec![vec![2, -1], vec![-1, 2]]), ("Z/4:1/8", vec![vec![4]])];
    let ok = lattices.iter().all(|(fqm, g)| {
        let d = FiniteQuadraticModule::parse(fqm).unwrap();
        let (_, sig) = weil::lattice_discriminant_values(g);
        weil::sigma_invariant::<f64>(&d).ok().and_then(|s| s.eighth_root) == Some(weil::milgram_root(sig))
    });
    rep.exact(S, "σ(D) agrees with Milgram's formula for A₁, A₂, ⟨4⟩", ok);
}

fn shintani_suite(rep: &mut Report) -> Result<(), Failure> {
    const S: &str = "shintani";
    let deltas = rep.opts.delta.map(|d| vec![d]).unwrap_or_else(|| vec![-3, -4]);
    let samples = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.5, 1.0),
        Complex64::new(-0.3, 1.2),
        Complex64::new(0.25, 1.5),
        Complex64::new(0.1, 1.05),
    ];
    let gammas = [[[1, 0], [4, 1]], [[1, 1], [0, 1]], [[3, -1], [4, -1]], [[1, 0], [-8, 1]]];
    let grid = forms::grid((-0.5, 0.5), (1.0, 2.0), 4);
    for delta in deltas {
        let f = forms::shintani_rhs(delta, rep.opts.dmax, rep.opts.nmax).map_err(|e| Failure::Usage(e.to_string()))?;
        let pre = forms::shintani_prefactor(delta).unwrap();
        let tag = format!("Δ = {delta}");
        let expected = match delta {
            -3 => Some(Coefficient::rational(rat(4, 3)) * Coefficient::sqrt_int(3)),
            -4 => Some(Coefficient::int(3)),
            _ => None,
        };
        if let Some(e) = expected {
            rep.exact(S, format!("{tag}: prefactor 12·H(|Δ|)/√|Δ| = {e}"), pre == e);
        }
        rep.exact(S, format!("{tag}: H(|Δ|) = {}", mfhc::rational::format_rational(&hurwitz(delta.unsigned_abs()))), true);
        rep.exact(S, format!("{tag}: symbolically harmonic of weight 3/2"), operators::is_harmonic(&f).unwrap_or(false) && f.weight() == Some(h(3)));
        let plus = f.terms().filter(|(a, _)| a.is_holomorphic()).all(|(a, _)| {
            let d = a.q.to_integer();
            let m: i64 = (d % 4i64).try_into().unwrap_or(0);
            !matches!(m.rem_euclid(4), 1 | 2)
        });
        rep.exact(S, format!("{tag}: plus-space support"), plus);
        let mut worst = 0.0f64;
        for g in gammas {
            worst = worst.max(forms::transformation_check(&f, g, &samples).unwrap_or(f64::INFINITY));
        }
        rep.numeric(S, format!("{tag}: Γ₀(4) transformation with theta multiplier, 5 points"), worst, 1e-6);
        let res = forms::harmonicity_residual(&f, &grid).unwrap_or(f64::INFINITY);
        rep.numeric(S, format!("{tag}: finite-difference Δ residual on v ∈ [1, 2]"), res, 1e-4);
    }
    let e = forms::build_e32star(rep.opts.dmax.min(40), rep.opts.nmax.min(6)).unwrap();
    let c = forms::xi_theta_constant(&e).ok().flatten();
    let label = c.as_ref().map(|c| format!("ξ_{{3/2}} E*_{{3/2}} = ({c})·θ")).unwrap_or_else(|| "ξ_{3/2} E*_{3/2} ∝ θ".into());
    rep.exact(S, label, c.is_some());
    if rep.opts.negative_control {
        let mut bad = forms::build_e32star(rep.opts.dmax, rep.opts.nmax).unwrap();
        let atom = Atom::v_power(-HalfInteger::HALF);
        let c = bad.coefficient(&atom);
        bad.add_term(-(c.clone() + c), atom);
        let dev = forms::transformation_check(&bad, [[1, 0], [4, 1]], &samples).unwrap_or(f64::INFINITY);
        rep.numeric(S, "negative control: E*_{3/2} with the v^{−1/2} sign flipped", dev, 1e-6);
    }
    Ok(())
}

fn random_mp(r: &mut ChaCha8Rng) -> MpElement {
    let k = MpElement::k_elem(r.gen_range(0.0..4.0 * std::f64::consts::PI));
    let a: f64 = r.gen_range(0.3..3.0);
    let m = if r.gen_bool(0.5) {
        MpElement::m_elem(a, if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
    } else {
        MpElement::m_elem(-a, if r.gen_bool(0.5) { Sign::PlusI } else { Sign::MinusI })
    }
    .unwrap();
    let n = MpElement::n_elem(r.gen_range(-3.0..3.0));
    k.multiply(&m).multiply(&n)
}

fn mp_suite(rep: &mut Report) {
    const S: &str = "mp";
    let pi = std::f64::consts::PI;
    let z = MpElement::k_elem(pi);
    rep.exact(S, "k(2π) = (I, −1) ≠ id", MpElement::k_elem(2.0 * pi) == MpElement::minus_one());
    rep.exact(S, "k(4π) = id", MpElement::k_elem(4.0 * pi) == MpElement::identity());
    rep.exact(S, "Z = k(π): Z² = (I, −1), Z⁴ = id", z.pow(2) == MpElement::minus_one() && z.pow(4) == MpElement::identity());
    rep.exact(S, "m(1, −1) = k(2π)", MpElement::m_elem(1.0, Sign::Minus).unwrap() == MpElement::k_elem(2.0 * pi));
    let s = MpElement::s_elem();
    let st = s.multiply(&MpElement::t_elem());
    let s2 = s.pow(2);
    let z_inv = z.pow(3);
    rep.exact(S, "(ST)³ = S² = (−I, i) = Z⁻¹, S⁸ = id", st.pow(3).approx_eq(&s2, 1e-12) && s2.approx_eq(&z_inv, 1e-12) && s.pow(8).approx_eq(&MpElement::identity(), 1e-12));
    let mut r = rng();
    let mut worst = 0.0f64;
    let mut branches = true;
    for _ in 0..300 {
        let (x, y, w) = (random_mp(&mut r), random_mp(&mut r), random_mp(&mut r));
        let a = x.multiply(&y).multiply(&w);
        let b = x.multiply(&y.multiply(&w));
        branches &= a.branch() == b.branch();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((a.matrix()[i][j] - b.matrix()[i][j]).abs());
            }
        }
    }
    rep.exact(S, "associativity on 300 random triples: branch bits", branches);
    rep.numeric(S, "associativity on 300 random triples: matrices", worst, 1e-12);
    let mut worst = 0.0f64;
    let mut shape = true;
    for _ in 0..300 {
        let x = random_mp(&mut r);
        let (n, m, k, p) = x.nmk_decompose();
        let back = n.multiply(&m).multiply(&k);
        shape &= back.branch() == x.branch() && p.a > 0.0 && (0.0..4.0 * pi).contains(&p.theta);
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((back.matrix()[i][j] - x.matrix()[i][j]).abs());
            }
        }
    }
    rep.exact(S, "n·m·k decomposition: branch, a > 0, θ ∈ [0, 4π)", shape);
    rep.numeric(S, "n·m·k decomposition roundtrip", worst, 1e-12);
    if rep.opts.negative_control {
        rep.exact(S, "negative control: k(2π) = id", MpElement::k_elem(2.0 * pi) == MpElement::identity());
    }
}

pub fn run(suite: Suite, opts: &Options, json: bool) -> Result<(), Failure> {
    let mut rep = Report { opts, checks: Vec::new() };
    let all = suite == Suite::All;
    if all || suite == Suite::Operators {
        operators_suite(&mut rep);
    }
    if all || suite == Suite::Hcmodule {
        hcmodule_suite(&mut rep);
    }
    if all || suite == Suite::Weil {
        weil_suite(&mut rep);
    }
    if all || suite == Suite::Shintani {
        shintani_suite(&mut rep)?;
    }
    if all || suite == Suite::Mp {
        mp_suite(&mut rep);
    }
    let passed = rep.checks.iter().all(|c| c.pass);
    if json {
        let checks: Vec<Value> = rep
            .checks
            .iter()
            .map(|c| json!({"suite": c.suite, "check": c.name, "pass": c.pass, "deviation": c.deviation, "tolerance": c.tolerance}))
            .collect();
        crate::print_json(&json!({"pass": passed, "checks": checks}));
    } else {
        for c in &rep.checks {
            let dev = match (c.deviation, c.tolerance) {
                (Some(d), Some(t)) => format!("  {d:.3e} (tol {t:.0e})"),
                _ => "  exact".to_string(),
            };
            println!("{}  {:<9} {}{}", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.name, dev);
        }
        let failed = rep.checks.iter().filter(|c| !c.pass).count();
        println!("{} checks, {} failed", rep.checks.len(), failed);
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Property(format!("{} check(s) failed", rep.checks.iter().filter(|c| !c.pass).count())))
    }
}
