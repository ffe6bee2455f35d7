//! Real-analytic Eisenstein series E(z, s) on the critical line s = 1/2 + ir,
//! from the Fourier expansion
//!
//! ```text
//!     E(z, s) = y^s + φ(s) y^{1−s}
//!             + (4√y / ξ(2s)) Σ_{n≥1} τ_{ir}(n) K_{ir}(2πny) cos(2πnx),
//! ```
//!
//! with τ_{ir}(n) = Σ_{ab=n} (a/b)^{ir} and φ(s) = ξ(2s−1)/ξ(2s). On the
//! critical line φ = conj(ξ(1+2ir)) / ξ(1+2ir) by the functional equation, so
//! only ξ on Re = 1 is ever evaluated.
//!
//! The spectral basis uses the unitary rotation E♮ = (ξ(2s)/|ξ(2s)|)·E, which
//! is real-valued and has the same modulus.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::bessel_k_imag;
use super::hpoint::HPoint;
use super::zeta::ln_completed_zeta_line;
use crate::error::SpecialFunctionError;

/// Omitted Fourier terms are bounded below this.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;
const MAX_TERMS: usize = 400;

/// Per-r constants of the expansion.
#[derive(Debug, Clone, Copy)]
pub struct EisensteinSeries {
    r: f64,
    /// arg ξ(1 + 2ir)
    theta: f64,
    /// 1 / |ξ(1 + 2ir)|
    inv_abs_xi: f64,
}

impl EisensteinSeries {
    pub fn new(r: f64) -> Result<Self, SpecialFunctionError> {
        if !r.is_finite() {
            return Err(SpecialFunctionError::Domain {
                function: "eisenstein",
                detail: format!("r = {r} is not finite"),
            });
        }
        if r == 0.0 {
            // E(z, 1/2) vanishes identically; θ → −π/2 from above
            return Ok(Self {
                r,
                theta: -PI / 2.0,
                inv_abs_xi: 0.0,
            });
        }
        let ln_xi = ln_completed_zeta_line(r)?;
        Ok(Self {
            r,
            theta: ln_xi.im,
            inv_abs_xi: (-ln_xi.re).exp(),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Scattering coefficient φ(1/2 + ir); unimodular.
    pub fn scattering(&self) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * self.theta)
    }

    /// Smallest term count whose first omitted term is below the tolerance
    /// at height y.
    pub fn terms_needed(&self, y: f64) -> usize {
        for n in 1..=MAX_TERMS {
            if self.term_bound(n + 1, y) < TRUNCATION_TOLERANCE {
                return n;
            }
        }
        MAX_TERMS
    }

    /// |n-th term| ≤ 4√y τ(n)/|ξ| K₀(2πny), with τ(n) ≤ 2√n and
    /// K₀(x) ≤ √(π/2x) e^{−x}.
    fn term_bound(&self, n: usize, y: f64) -> f64 {
        let x = 2.0 * PI * n as f64 * y;
        4.0 * y.sqrt() * 2.0 * (n as f64).sqrt() * self.inv_abs_xi * (PI / (2.0 * x)).sqrt()
            * (-x).exp()
    }

    /// Real part of the rotated series E♮ split as (constant term, Bessel sum).
    fn rotated_parts(&self, z: HPoint, n_terms: usize) -> Result<(f64, f64), SpecialFunctionError> {
        let (x, y) = (z.x(), z.y());
        let sqrt_y = y.sqrt();
        if self.inv_abs_xi == 0.0 {
            return Ok((0.0, 0.0));
        }
        let constant = 2.0 * sqrt_y * (self.r * y.ln() + self.theta).cos();
        if n_terms < self.terms_needed(y) {
            log::warn!(
                "eisenstein r={} at y={}: {} terms requested, {} needed for {:e}",
                self.r,
                y,
                n_terms,
                self.terms_needed(y),
                TRUNCATION_TOLERANCE
            );
        }
        let mut sum = 0.0;
        for n in 1..=n_terms {
            let k = bessel_k_imag(self.r, 2.0 * PI * n as f64 * y)?;
            if k == 0.0 {
                break;
            }
            sum += divisor_twist(n, self.r) * k * (2.0 * PI * n as f64 * x).cos();
        }
        Ok((constant, 4.0 * sqrt_y * self.inv_abs_xi * sum))
    }

    /// E♮(z, 1/2 + ir): real, Γ-invariant, |E♮| = |E|.
    pub fn eval_rotated(&self, z: HPoint, n_terms: usize) -> Result<f64, SpecialFunctionError> {
        let (c, b) = self.rotated_parts(z, n_terms)?;
        Ok(c + b)
    }

    /// E♮ with the truncation chosen automatically at the point's height.
    pub fn eval_rotated_auto(&self, z: HPoint) -> Result<f64, SpecialFunctionError> {
        self.eval_rotated(z, self.terms_needed(z.y()))
    }

    /// E♮ at every x of one row of height y, sharing the Bessel factors.
    pub fn eval_rotated_row(&self, y: f64, xs: &[f64]) -> Result<Vec<f64>, SpecialFunctionError> {
        let sqrt_y = y.sqrt();
        if self.inv_abs_xi == 0.0 {
            return Ok(vec![0.0; xs.len()]);
        }
        let constant = 2.0 * sqrt_y * (self.r * y.ln() + self.theta).cos();
        let n_terms = self.terms_needed(y);
        let mut factors = Vec::with_capacity(n_terms);
        for n in 1..=n_terms {
            let k = bessel_k_imag(self.r, 2.0 * PI * n as f64 * y)?;
            if k == 0.0 {
                break;
            }
            factors.push(4.0 * sqrt_y * self.inv_abs_xi * divisor_twist(n, self.r) * k);
        }
        Ok(xs
            .iter()
            .map(|&x| {
                constant
                    + factors
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c * (2.0 * PI * (k + 1) as f64 * x).cos())
                        .sum::<f64>()
            })
            .collect())
    }

    /// The standard normalization E(z, 1/2 + ir) = e^{−iθ} E♮.
    pub fn eval(&self, z: HPoint, n_terms: usize) -> Result<Complex64, SpecialFunctionError> {
        let v = self.eval_rotated(z, n_terms)?;
        Ok(Complex64::from_polar(v, -self.theta))
    }
}

/// τ_{ir}(n) = Σ_{d | n} cos(r ln(d²/n)).
pub fn divisor_twist(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    let mut total = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            total += (r * ((d * d) as f64 / nf).ln()).cos();
            let e = n / d;
            if e != d {
                total += (r * ((e * e) as f64 / nf).ln()).cos();
            }
        }
        d += 1;
    }
    total
}

/// E(z, 1/2 + ir) in the standard normalization (constant term
/// y^s + φ(s) y^{1−s}), evaluated at z as given with `n_terms` Fourier terms.
pub fn eval_eisenstein(r: f64, z: HPoint, n_terms: usize) -> Result<Complex64, SpecialFunctionError> {
    if n_terms == 0 {
        return Err(SpecialFunctionError::Truncation {
            function: "eval_eisenstein",
            detail: "n_terms must be at least 1".into(),
        });
    }
    EisensteinSeries::new(r)?.eval(z, n_terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(r: f64) -> EisensteinSeries {
        EisensteinSeries::new(r).unwrap()
    }

    #[test]
    fn periodic_in_x() {
        let e = series(3.0);
        let z = HPoint::new(0.3, 1.1).unwrap();
        let n = e.terms_needed(z.y());
        let a = e.eval(z, n).unwrap();
        let b = e.eval(z.translate(1.0), n).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn invariant_under_inversion() {
        for r in [1.0, 2.5, 5.0, 9.0] {
            let e = series(r);
            for &(x, y) in &[(0.3, 1.1), (0.1, 0.95), (-0.45, 1.2)] {
                let z = HPoint::new(x, y).unwrap();
                let w = z.invert();
                let a = e.eval(z, e.terms_needed(z.y())).unwrap();
                let b = e.eval(w, e.terms_needed(w.y())).unwrap();
                assert!((a - b).norm() < 1e-9, "r={r} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn scattering_is_unimodular() {
        for r in [2.0, 5.0, 10.0] {
            assert!((series(r).scattering().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_constant_term_shape() {
        // the rotated constant term equals the rotation of y^s + φ y^{1−s}
        let e = series(1.7);
        let y: f64 = 2.3;
        let s = Complex64::new(0.5, 1.7);
        let std = (s * y.ln()).exp() + e.scattering() * ((1.0 - s) * y.ln()).exp();
        let (c, _) = e.rotated_parts(HPoint::new(0.0, y).unwrap(), 1).unwrap();
        let rotated = std * Complex64::from_polar(1.0, e.theta);
        assert!((rotated.re - c).abs() < 1e-13);
        assert!(rotated.im.abs() < 1e-13);
    }

    #[test]
    fn vanishes_at_center() {
        let z = HPoint::new(0.2, 1.3).unwrap();
        assert_eq!(eval_eisenstein(0.0, z, 5).unwrap().norm(), 0.0);
        let small = eval_eisenstein(1e-6, z, 10).unwrap();
        assert!(small.norm() < 1e-5);
    }

    #[test]
    fn conjugate_symmetry_in_r() {
        let z = HPoint::new(0.31, 1.05).unwrap();
        let a = eval_eisenstein(4.0, z, 12).unwrap();
        let b = eval_eisenstein(-4.0, z, 12).unwrap();
        assert!((a.conj() - b).norm() < 1e-12);
    }

    #[test]
    fn row_evaluation_matches_pointwise() {
        let e = series(4.4);
        let xs = [-0.5, -0.1, 0.0, 0.37];
        let row = e.eval_rotated_row(1.05, &xs).unwrap();
        for (x, v) in xs.iter().zip(row) {
            let p = e.eval_rotated_auto(HPoint::new(*x, 1.05).unwrap()).unwrap();
            assert!((p - v).abs() < 1e-14);
        }
    }

    #[test]
    fn divisor_twist_small_cases() {
        assert_eq!(divisor_twist(1, 3.0), 1.0);
        // n = p: 2 cos(r ln p)
        assert!((divisor_twist(7, 0.4) - 2.0 * (0.4 * 7f64.ln()).cos()).abs() < 1e-15);
        // r = 0 gives the divisor count
        assert_eq!(divisor_twist(12, 0.0), 6.0);
    }

    #[test]
    fn terms_needed_grows_as_height_drops() {
        let e = series(6.0);
        assert!(e.terms_needed(0.5) > e.terms_needed(2.0));
        assert!(e.terms_needed(0.866) >= 1);
    }
}
