//! Exact coefficients and the term algebra of truncated real-analytic
//! Fourier expansions.

mod coefficient;
mod expansion;
pub mod json;

use thiserror::Error;

pub use coefficient::{Basis, Coefficient, Gauss};
pub use expansion::{AnalyticTerm, Atom, Expansion, GammaFactor, Window};

use crate::arith::ArithError;
use crate::half::HalfInteger;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QexpError {
    #[error("conjugation of Γ({s}, 4π·({ell})·v) is not defined: the gamma factor sits on the complex branch")]
    NonRealGammaBranch { s: HalfInteger, ell: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid expansion JSON: {0}")]
    Json(String),
}

impl From<ArithError> for QexpError {
    fn from(e: ArithError) -> Self {
        QexpError::Domain(e.to_string())
    }
}
