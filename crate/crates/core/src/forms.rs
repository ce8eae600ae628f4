//! Concrete forms: `E₂*`, Zagier's `E*_{3/2}`, and the evaluated Shintani
//! lift `√|Δ| Λ_Δ(E₂*) = 12 H(|Δ|) E*_{3/2}`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{hurwitz, hurwitz_table, sigma1, theta_eval, ArithError};
use crate::half::HalfInteger;
use crate::hcmodule::{classify_form_module, ktype_diagram, Diagram, HcError, KTypeSupport, ModuleClass, DEFAULT_WINDOW};
use crate::operators::{harmonic_gamma_atom, laplacian, lower, xi, OperatorError};
use crate::qexp::{Atom, Coefficient, Expansion, QexpError, Window};
use crate::rational::{int, is_squarefree_i64, rat};
use crate::Rational;

/// Default holomorphic truncation of `E*_{3/2}`.
pub const DEFAULT_D_MAX: u64 = 400;
/// Default non-holomorphic truncation of `E*_{3/2}`.
pub const DEFAULT_N_MAX: u64 = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormsError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("bad group element: {0}")]
    BadGroupElement(String),
    #[error("weight error: {0}")]
    Weight(String),
    #[error("truncation must be at least 1")]
    Truncation,
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Qexp(#[from] QexpError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Hc(#[from] HcError),
}

fn h(twice: i64) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

/// `E₂*(τ) = 1 − 24 Σ_{n ≤ n_max} σ₁(n) qⁿ − 3/(πv)`.
pub fn build_e2star(n_max: u64) -> Result<Expansion, FormsError> {
    if n_max == 0 {
        return Err(FormsError::Truncation);
    }
    let mut f = Expansion::zero(Some(HalfInteger::from_int(2)), Window::ints(0, n_max as i64));
    f.add_term(Coefficient::one(), Atom::one());
    for n in 1..=n_max as i64 {
        f.add_term(Coefficient::int(-24 * sigma1(n)? as i64), Atom::q_power(int(n)));
    }
    f.add_term(Coefficient::int(-3) * Coefficient::pi_pow(-HalfInteger::ONE), Atom::v_power(-HalfInteger::ONE));
    Ok(f)
}

/// `E*_{3/2}(τ) = Σ_{D ≤ D_max} H(D) q^D + (1/8π) v^{−1/2}
/// + Σ_{1 ≤ n ≤ n_max} (n/4√π) Γ(−½, 4πn²v) q^{−n²}`.
pub fn build_e32star(d_max: u64, n_max: u64) -> Result<Expansion, FormsError> {
    if d_max == 0 || n_max == 0 {
        return Err(FormsError::Truncation);
    }
    let n2 = (n_max * n_max) as i64;
    let k = h(3);
    let mut f = Expansion::zero(Some(k), Window::ints(-n2, d_max as i64));
    for (d, hd) in hurwitz_table(d_max).into_iter().enumerate() {
        if !hd.is_zero() {
            f.add_term(Coefficient::rational(hd), Atom::q_power(int(d as i64)));
        }
    }
    f.add_term(Coefficient::rational(rat(1, 8)) * Coefficient::pi_pow(-HalfInteger::ONE), Atom::v_power(-HalfInteger::HALF));
    let inv_sqrt_pi = Coefficient::pi_pow(-HalfInteger::HALF);
    for n in 1..=n_max as i64 {
        let c = Coefficient::rational(rat(n, 4)) * inv_sqrt_pi.clone();
        f.add_term(c, harmonic_gamma_atom(k, int(-n * n)));
    }
    Ok(f)
}

/// `Δ < 0` with `Δ ≡ 1 (4)` squarefree, or `Δ = 4m`, `m ≡ 2, 3 (4)` squarefree.
pub fn is_fundamental_discriminant(delta: i64) -> bool {
    if delta >= 0 {
        return false;
    }
    if delta.rem_euclid(4) == 1 {
        return is_squarefree_i64(delta);
    }
    if delta.rem_euclid(4) == 0 {
        let m = delta / 4;
        return matches!(m.rem_euclid(4), 2 | 3) && is_squarefree_i64(m);
    }
    false
}

/// `12 H(|Δ|) / √|Δ|`.
pub fn shintani_prefactor(delta: i64) -> Result<Coefficient, FormsError> {
    if !is_fundamental_discriminant(delta) {
        return Err(FormsError::NotFundamental(delta));
    }
    let d = delta.unsigned_abs();
    let inv = Rational::new(1.into(), d.into());
    Ok(Coefficient::rational(int(12) * hurwitz(d)) * Coefficient::sqrt_rational(&inv))
}

/// `Λ_Δ(E₂*) = (12 H(|Δ|)/√|Δ|) E*_{3/2}`.
pub fn shintani_rhs(delta: i64, d_max: u64, n_max: u64) -> Result<Expansion, FormsError> {
    let c = shintani_prefactor(delta)?;
    Ok(build_e32star(d_max, n_max)?.scale(&c))
}

/// `θ(τ) = Σ_{|n| ≤ n_max} q^{n²}`, weight ½.
pub fn theta_expansion(n_max: u64) -> Expansion {
    let n2 = (n_max * n_max) as i64;
    let mut f = Expansion::zero(Some(HalfInteger::HALF), Window::ints(0, n2));
    f.add_term(Coefficient::one(), Atom::one());
    for n in 1..=n_max as i64 {
        f.add_term(Coefficient::int(2), Atom::q_power(int(n * n)));
    }
    f
}

/// If `ξ_k f = c · θ` (truncated), returns `c`.
pub fn xi_theta_constant(f: &Expansion) -> Result<Option<Coefficient>, FormsError> {
    let g = xi(f)?;
    if !g.is_weakly_holomorphic() {
        return Ok(None);
    }
    let c = g.coefficient(&Atom::one());
    if c.is_zero() {
        return Ok(None);
    }
    let n_max = g.terms().map(|(a, _)| a.q.clone()).max().unwrap_or_else(Rational::zero);
    let n_max = n_max.to_integer().try_into().unwrap_or(0u64);
    let n_max = (n_max as f64).sqrt().floor() as u64;
    let expected = theta_expansion(n_max).scale(&c);
    let ok = g.len() == expected.len() && expected.terms().all(|(a, x)| g.coefficient(a) == *x);
    Ok(ok.then_some(c))
}

struct Stencil {
    c: Complex<f64>,
    u: [Complex<f64>; 4],
    v: [Complex<f64>; 4],
    step: f64,
}

impl Stencil {
    fn new(f: &Expansion, tau: Complex<f64>, step: f64) -> Result<Self, FormsError> {
        let at = |du: f64, dv: f64| f.eval_numeric::<f64>(tau + Complex::new(du, dv));
        let s = step;
        Ok(Stencil {
            c: at(0.0, 0.0)?,
            u: [at(2.0 * s, 0.0)?, at(s, 0.0)?, at(-s, 0.0)?, at(-2.0 * s, 0.0)?],
            v: [at(0.0, 2.0 * s)?, at(0.0, s)?, at(0.0, -s)?, at(0.0, -2.0 * s)?],
            step,
        })
    }

    fn d1(&self, p: &[Complex<f64>; 4]) -> Complex<f64> {
        (-p[0] + p[1] * 8.0 - p[2] * 8.0 + p[3]) / (12.0 * self.step)
    }

    fn d2(&self, p: &[Complex<f64>; 4]) -> Complex<f64> {
        (-p[0] + p[1] * 16.0 - self.c * 30.0 + p[2] * 16.0 - p[3]) / (12.0 * self.step * self.step)
    }
}

/// `(∂_τ f, ∂_τ̄ f)` by 5-point differences of the termwise numeric value.
pub fn wirtinger_numeric(f: &Expansion, tau: Complex<f64>, step: f64) -> Result<(Complex<f64>, Complex<f64>), FormsError> {
    let st = Stencil::new(f, tau, step)?;
    let (du, dv) = (st.d1(&st.u), st.d1(&st.v));
    let i = Complex::<f64>::i();
    Ok(((du - i * dv) * 0.5, (du + i * dv) * 0.5))
}

/// `Δ_k = −v²(∂_u² + ∂_v²) + ikv(∂_u + i∂_v)` by 5-point differences of the
/// termwise numeric value.
pub fn laplacian_numeric(f: &Expansion, tau: Complex<f64>, step: f64) -> Result<Complex<f64>, FormsError> {
    let k = f.weight().ok_or(OperatorError::MissingWeight)?.to_f64();
    let st = Stencil::new(f, tau, step)?;
    let v = tau.im;
    let lap = st.d2(&st.u) + st.d2(&st.v);
    let (du, dv) = (st.d1(&st.u), st.d1(&st.v));
    Ok(-lap * (v * v) + Complex::new(0.0, k * v) * (du + Complex::<f64>::i() * dv))
}

/// Finite-difference versions of the differential operators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NumericOperator {
    Raise,
    Lower,
    Laplacian,
    Xi,
    D,
}

/// The operator applied to `f` at `τ`, from finite differences of `f`.
pub fn operator_numeric(op: NumericOperator, f: &Expansion, tau: Complex<f64>, step: f64) -> Result<Complex<f64>, FormsError> {
    let weight = || f.weight().map(|k| k.to_f64()).ok_or(OperatorError::MissingWeight);
    let v = tau.im;
    let i = Complex::<f64>::i();
    Ok(match op {
        NumericOperator::Laplacian => laplacian_numeric(f, tau, step)?,
        NumericOperator::Raise => {
            let (dt, _) = wirtinger_numeric(f, tau, step)?;
            i * 2.0 * dt + f.eval_numeric::<f64>(tau)? * (weight()? / v)
        }
        NumericOperator::Lower => -i * 2.0 * v * v * wirtinger_numeric(f, tau, step)?.1,
        NumericOperator::Xi => i * 2.0 * v.powf(weight()?) * wirtinger_numeric(f, tau, step)?.1.conj(),
        NumericOperator::D => wirtinger_numeric(f, tau, step)?.0 / (i * 2.0 * std::f64::consts::PI),
    })
}

/// `max |Δ_k f|` over `grid`.
pub fn harmonicity_residual(f: &Expansion, grid: &[Complex<f64>]) -> Result<f64, FormsError> {
    let values: Result<Vec<f64>, FormsError> = grid.par_iter().map(|&t| laplacian_numeric(f, t, 1e-3).map(|z| z.norm())).collect();
    Ok(values?.into_iter().fold(0.0, f64::max))
}

/// An `n × n` grid on `[u₀, u₁] × [v₀, v₁]`.
pub fn grid(u: (f64, f64), v: (f64, f64), n: usize) -> Vec<Complex<f64>> {
    let lerp = |(a, b): (f64, f64), i: usize| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    (0..n).flat_map(|i| (0..n).map(move |j| Complex::new(lerp(u, i), lerp(v, j)))).collect()
}

/// `max |f(γτ) − (θ(γτ)/θ(τ))^{2k} f(τ)| / |f(τ)|` for `γ ∈ Γ₀(4)`.
pub fn transformation_check(f: &Expansion, gamma: [[i64; 2]; 2], samples: &[Complex<f64>]) -> Result<f64, FormsError> {
    let [[a, b], [c, d]] = gamma;
    if a * d - b * c != 1 {
        return Err(FormsError::BadGroupElement(format!("det of {gamma:?} is {}", a * d - b * c)));
    }
    if c.rem_euclid(4) != 0 {
        return Err(FormsError::BadGroupElement(format!("c = {c} is not divisible by 4")));
    }
    let k = f.weight().ok_or(OperatorError::MissingWeight)?;
    let power = match k.twice() {
        1 | 3 => k.twice() as i32,
        _ => return Err(FormsError::Weight(format!("the theta multiplier check needs weight 1/2 or 3/2, got {k}"))),
    };
    let devs: Result<Vec<f64>, FormsError> = samples
        .par_iter()
        .map(|&tau| {
            let gt = (tau * a as f64 + b as f64) / (tau * c as f64 + d as f64);
            let j = theta_eval(gt)? / theta_eval(tau)?;
            let ft = f.eval_numeric(tau)?;
            let fg = f.eval_numeric(gt)?;
            Ok((fg - j.powi(power) * ft).norm() / ft.norm())
        })
        .collect();
    Ok(devs?.into_iter().fold(0.0, f64::max))
}

/// The module generated by a harmonic form. Integral weights give the
/// out-of-scope marker.
pub fn classify_expansion(f: &Expansion) -> Result<ModuleClass, FormsError> {
    let k = f.weight().ok_or(OperatorError::MissingWeight)?;
    if !laplacian(f)?.is_empty() {
        return Err(FormsError::Weight("input is not harmonic".into()));
    }
    let lowering_vanishes = lower(f)?.is_empty();
    if k.is_integral() {
        return Ok(ModuleClass::integral_weight(k, None, None));
    }
    Ok(classify_form_module(k, lowering_vanishes)?)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Example {
    E2Star,
    E32Star,
}

impl std::str::FromStr for Example {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e2star" => Ok(Example::E2Star),
            "e32star" => Ok(Example::E32Star),
            other => Err(format!("unknown form `{other}` (expected e2star or e32star)")),
        }
    }
}

/// The module of `E₂*` or `E*_{3/2}` and its K-type diagram. For `E₂*`,
/// `L₂E₂* = 3/π` is constant and `R₀` kills it, so the K-types are
/// `0, 2, 4, …` (case III (b) of the `SL₂(ℝ)` classification).
pub fn classify_example(example: Example) -> Result<(ModuleClass, Diagram), FormsError> {
    let class = match example {
        Example::E32Star => classify_expansion(&build_e32star(16, 4)?)?,
        Example::E2Star => {
            let f = build_e2star(8)?;
            let lowered = lower(&f)?;
            if lowered.is_empty() || !lowered.terms().all(|(a, _)| *a == Atom::one()) {
                return Err(FormsError::Weight("L₂E₂* is expected to be a nonzero constant".into()));
            }
            ModuleClass::integral_weight(HalfInteger::from_int(2), Some("III (b)"), Some(KTypeSupport::up(HalfInteger::ZERO)))
        }
    };
    let diagram = ktype_diagram(&class, DEFAULT_WINDOW)?;
    Ok((class, diagram))
}
