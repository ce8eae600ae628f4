//! Computations with harmonic weak Maaß forms of integral and half-integral
//! weight.
//!
//! The crate is organised bottom-up:
//!
//! - [`qexp`]: the exact coefficient ring and the term algebra of truncated
//!   real-analytic Fourier expansions, with symbolic `∂_τ`, `∂_τ̄` and
//!   complex conjugation.
//! - [`operators`]: raising, lowering, Laplacian, `ξ`, Bol and flipping
//!   operators acting on expansions.
//! - [`hcmodule`]: principal series of `Mp₁(ℝ)`, the classification of the
//!   Harish-Chandra modules generated by harmonic forms, and K-type diagrams.
//! - [`metaplectic`]: arithmetic in the metaplectic double cover.
//! - [`weil`]: finite quadratic modules and their Weil representations.
//! - [`arith`]: divisor sums, Hurwitz class numbers and special functions.
//! - [`forms`]: the Eisenstein series `E₂*`, Zagier's `E*_{3/2}` and the
//!   Shintani lift of `E₂*`.
//!
//! Numeric layers are generic over a [`num_traits::Float`] scalar; the exact
//! layers are generic over [`hcmodule::ExactScalar`]. The aliases below pin
//! the usual concrete choices.

pub mod arith;
pub mod forms;
pub mod half;
pub mod hcmodule;
pub mod metaplectic;
pub mod operators;
pub mod qexp;
pub mod rational;
pub mod weil;

pub use half::HalfInteger;
pub use qexp::{Coefficient, Expansion};

/// Arbitrary-precision rational numbers used by every exact computation.
pub type Rational = num_rational::BigRational;

/// Double-precision complex numbers.
pub type Complex64 = num_complex::Complex<f64>;

/// Principal-series vectors with rational `ν` and rational coefficients.
pub type PsVector = hcmodule::PrincipalSeriesVector<Rational>;

/// Principal-series vectors over the full coefficient ring (allows
/// irrational or complex `ν`).
pub type PsVectorExact = hcmodule::PrincipalSeriesVector<Coefficient>;

/// Metaplectic elements with floating-point matrix entries.
pub type MpElement = metaplectic::MetaplecticElement<f64>;

/// Metaplectic elements with exact rational matrix entries.
pub type MpElementExact = metaplectic::MetaplecticElement<Rational>;

/// Weil representation matrices in double precision.
pub type WeilMatrix = weil::CMatrix<f64>;
