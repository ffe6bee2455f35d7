//! Spectral basis functions on ℍ: the constant form, Eisenstein series on the
//! critical line, and Maass cusp forms, plus the special functions behind them.

pub mod bessel;
pub mod eisenstein;
pub mod hpoint;
pub mod maass;
pub mod zeta;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

pub use bessel::{bessel_k_imag, bessel_k_imag_scaled};
pub use eisenstein::{eval_eisenstein, EisensteinSeries};
pub use hpoint::HPoint;
pub use maass::{load_maass_data, parse_maass_data, MaassFormData, Parity};
pub use zeta::zeta_line;

use crate::error::SpecialFunctionError;

/// The unit-norm constant form on F, √(3/π) (vol F = π/3).
pub fn constant_form_value() -> f64 {
    (3.0 / PI).sqrt()
}

/// One basis function Φ_ξ. All three kinds are real-valued on ℍ.
#[derive(Debug, Clone)]
pub enum BasisFunction {
    Constant,
    Cusp(Arc<MaassFormData>),
    Eisenstein(EisensteinSeries),
}

impl BasisFunction {
    /// Φ_ξ(z), evaluated after reducing z into F.
    pub fn eval(&self, z: HPoint) -> Result<f64, SpecialFunctionError> {
        match self {
            BasisFunction::Constant => Ok(constant_form_value()),
            BasisFunction::Cusp(f) => f.eval_reduced(z),
            BasisFunction::Eisenstein(e) => e.eval_rotated_auto(z.reduce()),
        }
    }

    /// Φ_ξ on one row of height y (no reduction; the row must lie where the
    /// expansions are accurate, e.g. inside F).
    pub fn eval_row(&self, y: f64, xs: &[f64]) -> Result<Vec<f64>, SpecialFunctionError> {
        match self {
            BasisFunction::Constant => Ok(vec![constant_form_value(); xs.len()]),
            BasisFunction::Cusp(f) => f.eval_row(y, xs),
            BasisFunction::Eisenstein(e) => e.eval_rotated_row(y, xs),
        }
    }

    /// Φ̄_ξ(i), the coefficient of Φ_ξ in the delta at the basepoint.
    pub fn basepoint_value(&self) -> Result<Complex64, SpecialFunctionError> {
        Ok(Complex64::new(self.eval(HPoint::I)?, 0.0))
    }
}
