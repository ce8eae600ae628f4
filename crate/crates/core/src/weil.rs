//! Finite quadratic modules and their Weil representations.
//!
//! A module `M = ⊕ ℤ/nᵢ` carries `q(x) = Σ gᵢⱼ xᵢ xⱼ mod 1`. The basis of the
//! representation space is `M` enumerated lexicographically in generator
//! coordinates (first coordinate most significant).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, FloatConst, One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::rational::{format_rational, frac, parse_rational};
use crate::Rational;

/// Largest `#M` accepted.
pub const MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeilError {
    #[error("degenerate quadratic form: |σ(D)| = {0}")]
    DegenerateForm(f64),
    #[error("cannot parse module `{0}`: expected terms like `Z/4:1/8` joined by `+`")]
    Parse(String),
    #[error("q is not well defined modulo the orders: {0}")]
    NotWellDefined(String),
    #[error("module of order {0} exceeds the limit {MAX_ORDER}")]
    TooLarge(usize),
}

#[derive(Clone, PartialEq, Debug)]
pub struct FiniteQuadraticModule {
    orders: Vec<u64>,
    gram: Option<Vec<Vec<Rational>>>,
    elements: Vec<Vec<u64>>,
    /// `q(m)` in `[0, 1)`, indexed like `elements`.
    q: Vec<Rational>,
}

fn enumerate(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &n in orders {
        out = out.into_iter().flat_map(|p| (0..n).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

impl FiniteQuadraticModule {
    pub fn trivial() -> Self {
        FiniteQuadraticModule { orders: vec![], gram: Some(vec![]), elements: vec![vec![]], q: vec![Rational::zero()] }
    }

    pub fn new(orders: Vec<u64>, gram: Vec<Vec<Rational>>) -> Result<Self, WeilError> {
        let r = orders.len();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(WeilError::NotWellDefined(format!("Gram matrix must be {r}×{r}")));
        }
        if orders.contains(&0) {
            return Err(WeilError::NotWellDefined("orders must be positive".into()));
        }
        let size = orders.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n as usize)).unwrap_or(usize::MAX);
        if size > MAX_ORDER {
            return Err(WeilError::TooLarge(size));
        }
        for i in 0..r {
            for j in 0..r {
                if gram[i][j] != gram[j][i] {
                    return Err(WeilError::NotWellDefined("Gram matrix must be symmetric".into()));
                }
            }
            let n = Rational::from_integer(orders[i].into());
            let two = Rational::from_integer(2.into());
            if !(&n * &n * &gram[i][i]).is_integer() || !(&two * &n * &gram[i][i]).is_integer() {
                return Err(WeilError::NotWellDefined(format!("generator {i}: q-value {} vs order {}", format_rational(&gram[i][i]), orders[i])));
            }
            for j in (0..r).filter(|&j| j != i) {
                if !(&two * &n * &gram[i][j]).is_integer() {
                    return Err(WeilError::NotWellDefined(format!("entry ({i}, {j}) vs order {}", orders[i])));
                }
            }
        }
        let elements = enumerate(&orders);
        let q = elements
            .iter()
            .map(|x| {
                let mut s = Rational::zero();
                for i in 0..r {
                    for j in 0..r {
                        s += &gram[i][j] * Rational::from_integer((x[i] * x[j]).into());
                    }
                }
                frac(&s)
            })
            .collect();
        Ok(FiniteQuadraticModule { orders, gram: Some(gram), elements, q })
    }

    /// A module whose `q` is an arbitrary table of values (not checked to be
    /// a quadratic form). Used for negative controls.
    pub fn from_values_unchecked(orders: Vec<u64>, values: Vec<Rational>) -> Result<Self, WeilError> {
        let elements = enumerate(&orders);
        if values.len() != elements.len() {
            return Err(WeilError::NotWellDefined(format!("expected {} values, got {}", elements.len(), values.len())));
        }
        Ok(FiniteQuadraticModule { orders, gram: None, elements, q: values.iter().map(frac).collect() })
    }

    /// Cyclic generators with prescribed q-values: `"Z/2:1/4 + Z/4:1/8"`.
    pub fn parse(s: &str) -> Result<Self, WeilError> {
        let s = s.trim();
        if s.is_empty() || s == "0" || s == "trivial" {
            return Ok(Self::trivial());
        }
        let mut orders = Vec::new();
        let mut values = Vec::new();
        for term in s.split('+') {
            let bad = || WeilError::Parse(s.to_string());
            let (group, value) = term.trim().split_once(':').ok_or_else(bad)?;
            let n = group.trim().strip_prefix("Z/").ok_or_else(bad)?.trim().parse::<u64>().map_err(|_| bad())?;
            orders.push(n);
            values.push(parse_rational(value.trim()).map_err(|_| bad())?);
        }
        let r = orders.len();
        let gram = (0..r)
            .map(|i| (0..r).map(|j| if i == j { values[i].clone() } else { Rational::zero() }).collect())
            .collect();
        Self::new(orders, gram)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn gram(&self) -> Option<&Vec<Vec<Rational>>> {
        self.gram.as_ref()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<u64>] {
        &self.elements
    }

    fn index_of(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.orders).fold(0usize, |acc, (&xi, &n)| acc * n as usize + (xi % n) as usize)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let s: Vec<u64> = self.elements[x].iter().zip(&self.elements[y]).map(|(a, b)| a + b).collect();
        self.index_of(&s)
    }

    /// `q(m)` in `[0, 1)`.
    pub fn q(&self, x: usize) -> &Rational {
        &self.q[x]
    }

    /// `⟨x, y⟩_q = q(x + y) − q(x) − q(y) mod 1`.
    pub fn bilinear(&self, x: usize, y: usize) -> Rational {
        frac(&(self.q(self.add(x, y)) - self.q(x) - self.q(y)))
    }

    /// Checks `⟨x + y, z⟩ = ⟨x, z⟩ + ⟨y, z⟩` on all triples.
    pub fn is_bilinear(&self) -> bool {
        let n = self.order();
        let table: Vec<Vec<Rational>> = (0..n).into_par_iter().map(|x| (0..n).map(|z| self.bilinear(x, z)).collect()).collect();
        (0..n).into_par_iter().all(|x| {
            (0..n).all(|y| {
                let xy = self.add(x, y);
                (0..n).all(|z| table[xy][z] == frac(&(&table[x][z] + &table[y][z])))
            })
        })
    }
}

impl fmt::Display for FiniteQuadraticModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("trivial");
        }
        if self.gram.is_none() {
            let orders: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
            let values: Vec<String> = self.q.iter().map(format_rational).collect();
            return write!(f, "{} with q = [{}]", orders.join(" + "), values.join(", "));
        }
        let terms: Vec<String> = self
            .orders
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut e = vec![0; self.orders.len()];
                e[i] = 1;
                format!("Z/{n}:{}", format_rational(self.q(self.index_of(&e))))
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

fn e<T: Float + FloatConst>(x: &Rational) -> Complex<T> {
    let t = crate::rational::to_f64(&frac(x));
    Complex::from_polar(T::one(), T::from(2.0 * std::f64::consts::PI * t).unwrap())
}

/// `σ(D) = (1/√#M) Σ e(−q(m))`, with `σ = e(−j/8)` recognized when possible.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SigmaInvariant<T> {
    pub value: Complex<T>,
    pub eighth_root: Option<u8>,
}

fn sigma_raw<T: Float + FloatConst>(d: &FiniteQuadraticModule) -> Complex<T> {
    let sum = d.q.iter().fold(Complex::zero(), |acc, q| acc + e::<T>(&-q));
    sum / T::from(d.order()).unwrap().sqrt()
}

pub fn sigma_invariant<T: Float + FloatConst>(d: &FiniteQuadraticModule) -> Result<SigmaInvariant<T>, WeilError> {
    let value = sigma_raw::<T>(d);
    let modulus = value.norm().to_f64().unwrap();
    if (modulus - 1.0).abs() > 1e-6_f64.max(T::epsilon().to_f64().unwrap() * 64.0) {
        return Err(WeilError::DegenerateForm(modulus));
    }
    let tol = 1e-10_f64.max(T::epsilon().to_f64().unwrap() * 64.0);
    let eighth_root = (0..8u8).find(|&j| {
        let root = Complex::<f64>::from_polar(1.0, -2.0 * std::f64::consts::PI * j as f64 / 8.0);
        let v = Complex::new(value.re.to_f64().unwrap(), value.im.to_f64().unwrap());
        (v - root).norm() <= tol
    });
    Ok(SigmaInvariant { value, eighth_root })
}

/// Dense complex matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Float> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::one();
        }
        m
    }

    pub fn diagonal(d: Vec<Complex<T>>) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.into_iter().enumerate() {
            m.data[i * m.n + i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Complex<T>) {
        self.data[i * self.n + j] = x;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(j, i).conj());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(j, i));
            }
        }
        m
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|x| *x * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| &acc * self)
    }

    /// `max |aᵢⱼ − bᵢⱼ|`.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.n)
            .map(|i| {
                Value::Array(
                    (0..self.n)
                        .map(|j| {
                            let x = self.get(i, j);
                            json!([x.re.to_f64().unwrap(), x.im.to_f64().unwrap()])
                        })
                        .collect(),
                )
            })
            .collect();
        Value::Array(rows)
    }
}

impl<T: Float> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        let n = self.n;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] = m.data[i * n + j] + a * rhs.get(k, j);
                }
            }
        }
        m
    }
}

impl<T: Float> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect() }
    }
}

impl<T: Float> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect() }
    }
}

/// `ρ(T) m = e(q(m)) m`.
pub fn rho_t<T: Float + FloatConst>(d: &FiniteQuadraticModule) -> CMatrix<T> {
    CMatrix::diagonal(d.q.iter().map(e::<T>).collect())
}

/// The scalar in front of `Σ e(−⟨m, m′⟩) m′ / √#M` in `ρ(S)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum GaussNormalization {
    /// `σ(D)`: satisfies the `Mp₁(ℤ)` relations.
    #[default]
    Sigma,
    /// `1/σ(D)`.
    InverseSigma,
}

fn rho_s_with<T: Float + FloatConst>(d: &FiniteQuadraticModule, sigma: Complex<T>, norm: GaussNormalization) -> CMatrix<T> {
    let n = d.order();
    let c = match norm {
        GaussNormalization::Sigma => sigma,
        GaussNormalization::InverseSigma => sigma.inv(),
    } / T::from(n).unwrap().sqrt();
    let mut m = CMatrix::zeros(n);
    for x in 0..n {
        for y in 0..n {
            m.set(y, x, c * e::<T>(&-d.bilinear(x, y)));
        }
    }
    m
}

/// `ρ(S) m = (σ(D)/√#M) Σ_{m′} e(−⟨m, m′⟩) m′`.
pub fn rho_s<T: Float + FloatConst>(d: &FiniteQuadraticModule) -> Result<CMatrix<T>, WeilError> {
    rho_s_normalized(d, GaussNormalization::Sigma)
}

pub fn rho_s_normalized<T: Float + FloatConst>(d: &FiniteQuadraticModule, norm: GaussNormalization) -> Result<CMatrix<T>, WeilError> {
    let sigma = sigma_invariant::<T>(d)?;
    Ok(rho_s_with(d, sigma.value, norm))
}

#[derive(Clone, PartialEq, Debug)]
pub struct RelationReport {
    pub module: String,
    pub tolerance: f64,
    pub unitary: f64,
    pub symmetric: f64,
    /// `(ρ(S)ρ(T))³ = ρ(S)²`.
    pub st_cubed: f64,
    /// `ρ(S)⁸ = I`.
    pub s_eighth: f64,
    /// `[ρ(S)², ρ(T)] = 0`.
    pub central: f64,
    pub sigma: Option<u8>,
    /// `ρ((−I, i)) = ρ(S)²`, for inspection.
    pub center: Vec<Vec<[f64; 2]>>,
}

impl RelationReport {
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("ρ(S) unitary", self.unitary),
            ("ρ(S) symmetric", self.symmetric),
            ("(ρ(S)ρ(T))³ = ρ(S)²", self.st_cubed),
            ("ρ(S)⁸ = I", self.s_eighth),
            ("ρ(S)² ρ(T) = ρ(T) ρ(S)²", self.central),
        ]
    }

    pub fn passed(&self) -> bool {
        self.entries().iter().all(|(_, d)| *d <= self.tolerance)
    }

    pub fn max_deviation(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "module": self.module,
            "tolerance": self.tolerance,
            "pass": self.passed(),
            "sigma_eighth_root": self.sigma,
            "deviations": self.entries().iter().map(|(k, v)| json!({"relation": k, "deviation": v, "pass": *v <= self.tolerance})).collect::<Vec<_>>(),
            "rho_center": self.center,
        })
    }
}

/// Checks the `Mp₁(ℤ)` relations for `ρ(T)`, `ρ(S)`. Degenerate or
/// non-quadratic `q` shows up as failing entries, not as an error.
pub fn check_relations(d: &FiniteQuadraticModule, tolerance: f64) -> RelationReport {
    check_relations_normalized(d, tolerance, GaussNormalization::Sigma)
}

pub fn check_relations_normalized(d: &FiniteQuadraticModule, tolerance: f64, norm: GaussNormalization) -> RelationReport {
    let sigma = sigma_raw::<f64>(d);
    let recognized = sigma_invariant::<f64>(d).ok().and_then(|s| s.eighth_root);
    let t = rho_t::<f64>(d);
    let s = rho_s_with(d, sigma, norm);
    let n = d.order();
    let id = CMatrix::identity(n);
    let s2 = &s * &s;
    let st = &s * &t;
    let center = (0..n).map(|i| (0..n).map(|j| [s2.get(i, j).re, s2.get(i, j).im]).collect()).collect();
    RelationReport {
        module: d.to_string(),
        tolerance,
        unitary: (&s * &s.adjoint()).max_deviation(&id),
        symmetric: s.max_deviation(&s.transpose()),
        st_cubed: st.pow(3).max_deviation(&s2),
        s_eighth: s.pow(8).max_deviation(&id),
        central: (&s2 * &t).max_deviation(&(&t * &s2)),
        sigma: recognized,
        center,
    }
}

/// The discriminant form `L′/L` of an even lattice with Gram matrix `g`
/// (`q(x) = xᵀgx/2`), as a sorted list of q-values, and its signature.
pub fn lattice_discriminant_values(g: &[Vec<i64>]) -> (Vec<Rational>, i64) {
    let r = g.len();
    let gq: Vec<Vec<Rational>> = g.iter().map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let inv = invert(&gq);
    let det = determinant(&gq).abs().to_integer();
    let det: u64 = det.try_into().expect("small determinant");
    let mut seen = std::collections::BTreeSet::new();
    let mut values = Vec::new();
    for u in enumerate(&vec![det; r]) {
        let x: Vec<Rational> = (0..r)
            .map(|i| frac(&(0..r).fold(Rational::zero(), |acc, j| acc + &inv[i][j] * Rational::from_integer(u[j].into()))))
            .collect();
        if !seen.insert(x.clone()) {
            continue;
        }
        let mut q = Rational::zero();
        for i in 0..r {
            for j in 0..r {
                q += &x[i] * &gq[i][j] * &x[j];
            }
        }
        values.push(frac(&(q / Rational::from_integer(2.into()))));
    }
    values.sort();
    (values, signature(&gq))
}

fn determinant(m: &[Vec<Rational>]) -> Rational {
    let (_, det) = eliminate(m);
    det
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    eliminate(m).0
}

fn eliminate(m: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Rational) {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular Gram matrix");
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in (0..n).filter(|&r| r != col) {
            let f = a[r][col].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                a[r][j] -= x;
                inv[r][j] -= y;
            }
        }
    }
    (inv, det)
}

/// Sylvester: signs of the ratios of leading principal minors.
fn signature(m: &[Vec<Rational>]) -> i64 {
    let n = m.len();
    let mut prev = Rational::one();
    let mut sig = 0;
    for k in 1..=n {
        let minor: Vec<Vec<Rational>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        let d = determinant(&minor);
        assert!(!d.is_zero(), "signature needs nonvanishing leading minors");
        sig += if (&d / &prev) > Rational::zero() { 1 } else { -1 };
        prev = d;
    }
    sig
}

/// `e(−sig/8)` as an eighth-root index `j`.
pub fn milgram_root(signature: i64) -> u8 {
    signature.mod_floor(&8) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn sigma_fixtures() {
        for (fqm, j) in [("Z/2:1/4", 1), ("Z/3:1/3", 2), ("Z/4:1/8", 1), ("0", 0)] {
            let d = FiniteQuadraticModule::parse(fqm).unwrap();
            let s = sigma_invariant::<f64>(&d).unwrap();
            assert_eq!(s.eighth_root, Some(j), "{fqm}");
        }
    }

    #[test]
    fn z2_matrices() {
        let d = FiniteQuadraticModule::parse("Z/2:1/4").unwrap();
        let t = rho_t::<f64>(&d);
        assert!(t.max_deviation(&CMatrix::diagonal(vec![Complex::one(), Complex::i()])) < 1e-15);
        let s = rho_s_normalized::<f64>(&d, GaussNormalization::InverseSigma).unwrap();
        let c = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 8.0) / 2f64.sqrt();
        assert!((s.get(1, 1) + c).norm() < 1e-15 && (s.get(0, 1) - c).norm() < 1e-15);
    }

    #[test]
    fn relations_hold_for_sigma_normalization() {
        for fqm in ["Z/2:1/4", "Z/3:1/3", "Z/4:1/8", "Z/2:1/4 + Z/4:1/8", "0"] {
            let d = FiniteQuadraticModule::parse(fqm).unwrap();
            let r = check_relations(&d, 1e-10);
            assert!(r.passed(), "{fqm}: {r:?}");
        }
        let d = FiniteQuadraticModule::parse("Z/2:1/4").unwrap();
        assert!(!check_relations_normalized(&d, 1e-10, GaussNormalization::InverseSigma).passed());
    }

    #[test]
    fn corrupted_form_fails() {
        let d = FiniteQuadraticModule::from_values_unchecked(vec![3], vec![rat(0, 1), rat(1, 3), rat(1, 2)]).unwrap();
        assert!(!d.is_bilinear());
        assert!(!check_relations(&d, 1e-10).passed());
        let d = FiniteQuadraticModule::from_values_unchecked(vec![2], vec![rat(0, 1), rat(1, 3)]).unwrap();
        assert!(matches!(sigma_invariant::<f64>(&d), Err(WeilError::DegenerateForm(_))));
        assert!(!check_relations(&d, 1e-10).passed());
    }

    #[test]
    fn well_definedness() {
        assert!(matches!(FiniteQuadraticModule::parse("Z/2:1/3"), Err(WeilError::NotWellDefined(_))));
        assert!(matches!(FiniteQuadraticModule::parse("Z2:1/4"), Err(WeilError::Parse(_))));
        assert!(FiniteQuadraticModule::parse("Z/2:1/2").is_ok());
    }

    #[test]
    fn milgram_against_lattices() {
        for (fqm, gram) in [("Z/2:1/4", vec![vec![2]]), ("Z/3:1/3", vec![vec![2, -1], vec![-1, 2]]), ("Z/4:1/8", vec![vec![4]])] {
            let d = FiniteQuadraticModule::parse(fqm).unwrap();
            let (values, sig) = lattice_discriminant_values(&gram);
            let mut ours: Vec<Rational> = (0..d.order()).map(|x| d.q(x).clone()).collect();
            ours.sort();
            assert_eq!(values, ours, "{fqm}");
            assert_eq!(sigma_invariant::<f64>(&d).unwrap().eighth_root, Some(milgram_root(sig)));
        }
    }

    #[test]
    fn f32_matrices() {
        let d = FiniteQuadraticModule::parse("Z/3:1/3").unwrap();
        let s = rho_s::<f32>(&d).unwrap();
        assert!((&s * &s.adjoint()).max_deviation(&CMatrix::identity(3)) < 1e-5);
    }
}
