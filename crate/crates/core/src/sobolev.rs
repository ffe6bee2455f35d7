//! Coefficient functions on a spectral grid: the weighted L² spaces V^s, the
//! duality pairing, the multiplication maps μ and M, the resolvent, the
//! spectral coefficients of the delta at i, and the analysis transform.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::automorphic::HPoint;
use crate::error::{GridError, HeatError};
use crate::fundamental_domain::QuadSpec;
use crate::spectral_model::{SobolevIndex, SpectralGrid};

/// A complex value per grid point. The Sobolev index is not stored: the same
/// vector is an element of every V^s, and norms take s as a parameter.
#[derive(Debug, Clone)]
pub struct CoeffFn {
    grid: Arc<SpectralGrid>,
    values: Vec<Complex64>,
}

impl CoeffFn {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<Complex64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(GridError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Unit vector at coefficient index `index`.
    pub fn indicator(grid: Arc<SpectralGrid>, index: usize) -> Self {
        let mut f = Self::zeros(grid);
        f.values[index] = Complex64::new(1.0, 0.0);
        f
    }

    /// Unit vector at the residual (constant-form) point.
    pub fn residual_indicator(grid: Arc<SpectralGrid>) -> Self {
        let i = grid.residual_index();
        Self::indicator(grid, i)
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn same_grid(&self, other: &CoeffFn) -> Result<(), GridError> {
        if Arc::ptr_eq(&self.grid, &other.grid) {
            Ok(())
        } else {
            Err(GridError::GridMismatch)
        }
    }

    /// Pointwise map with access to the eigenvalue at each point.
    pub fn map_with_eigenvalue<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let values = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(p, v)| f(p.eigenvalue(), *v))
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    /// ‖f‖_{V^s} = (Σ w (1−λ)^s |f|²)^{1/2}.
    pub fn norm_vs(&self, s: SobolevIndex) -> f64 {
        self.grid
            .points()
            .zip(self.grid.weights())
            .zip(&self.values)
            .map(|((p, w), v)| w * p.sobolev_weight(s) * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// The weight-free duality pairing Σ w f ḡ (V^s × V^{−s}).
    pub fn pairing(&self, other: &CoeffFn) -> Result<Complex64, GridError> {
        self.same_grid(other)?;
        Ok(self
            .grid
            .weights()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| a * b.conj() * w)
            .sum())
    }

    /// The V^s inner product Σ w (1−λ)^s f ḡ.
    pub fn pairing_vs(&self, other: &CoeffFn, s: SobolevIndex) -> Result<Complex64, GridError> {
        self.same_grid(other)?;
        Ok(self
            .grid
            .points()
            .zip(self.grid.weights())
            .zip(self.values.iter().zip(&other.values))
            .map(|((p, w), (a, b))| a * b.conj() * (w * p.sobolev_weight(s)))
            .sum())
    }

    /// μ: multiplication by 1 − λ, an isometry V^s → V^{s−2}.
    pub fn mu_apply(&self) -> Self {
        self.map_with_eigenvalue(|lam, v| v * (1.0 - lam))
    }

    /// μ⁻¹: division by 1 − λ ≥ 1.
    pub fn mu_inverse(&self) -> Self {
        self.map_with_eigenvalue(|lam, v| v / (1.0 - lam))
    }

    /// M: multiplication by λ, the generator of the heat semigroup.
    pub fn m_operator_apply(&self) -> Self {
        self.map_with_eigenvalue(|lam, v| v * lam)
    }

    /// (M − C)⁻¹ f = f / (λ − C), for C > 0.
    pub fn resolvent_apply(&self, c: f64) -> Result<Self, HeatError> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(HeatError::BadResolvent(c));
        }
        Ok(self.map_with_eigenvalue(|lam, v| v / (lam - c)))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * a).collect(),
        }
    }

    /// self + a·other
    pub fn axpy(&self, a: Complex64, other: &CoeffFn) -> Result<Self, GridError> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + a * y)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &CoeffFn) -> Result<Self, GridError> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn try_add(&self, other: &CoeffFn) -> Result<Self, GridError> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }
}

impl Sub for &CoeffFn {
    type Output = CoeffFn;

    /// Panics on a grid mismatch; use [`CoeffFn::try_sub`] to handle it.
    fn sub(self, rhs: &CoeffFn) -> CoeffFn {
        self.try_sub(rhs).expect("coefficient vectors on different grids")
    }
}

impl Add for &CoeffFn {
    type Output = CoeffFn;

    fn add(self, rhs: &CoeffFn) -> CoeffFn {
        self.try_add(rhs).expect("coefficient vectors on different grids")
    }
}

impl Mul<&CoeffFn> for f64 {
    type Output = CoeffFn;

    fn mul(self, rhs: &CoeffFn) -> CoeffFn {
        rhs.scale(Complex64::new(self, 0.0))
    }
}

/// Fδ: the value Φ̄_ξ(i) at every grid point.
pub fn delta_coefficients(grid: &Arc<SpectralGrid>) -> CoeffFn {
    CoeffFn {
        grid: grid.clone(),
        values: grid.points().map(|p| p.basepoint_value).collect(),
    }
}

/// ⟨f, Φ_ξ⟩ for every grid point, by quadrature over F. `f` must be
/// Γ-invariant; it is sampled only inside F.
pub fn analyze<F: Fn(HPoint) -> f64>(
    f: F,
    grid: &Arc<SpectralGrid>,
    spec: &QuadSpec,
) -> Result<CoeffFn, GridError> {
    if let Some(cutoff) = spec.height_cutoff {
        warn_on_cusp_mass(&f, cutoff);
    }
    let basis = grid.basis();
    let mut values = vec![Complex64::new(0.0, 0.0); basis.len()];
    for row in spec.rows() {
        let xs: Vec<f64> = row.points.iter().map(|p| p.0).collect();
        let weighted: Vec<f64> = row
            .points
            .iter()
            .map(|&(x, w)| {
                let z = HPoint::new(x, row.y).expect("quadrature node in H");
                w * f(z)
            })
            .collect();
        if weighted.iter().all(|v| *v == 0.0) {
            continue;
        }
        for (slot, phi) in values.iter_mut().zip(&basis) {
            let row_vals = phi.eval_row(row.y, &xs)?;
            let s: f64 = weighted.iter().zip(&row_vals).map(|(a, b)| a * b).sum();
            *slot += s;
        }
    }
    CoeffFn::new(grid.clone(), values)
}

/// Crude estimate of ∫_{y>Y} |f|² dμ from samples at heights Y, 2Y, 4Y.
fn warn_on_cusp_mass<F: Fn(HPoint) -> f64>(f: &F, cutoff: f64) {
    let mut peak: f64 = 0.0;
    for k in 0..3 {
        let y = cutoff * (1 << k) as f64;
        for j in 0..8 {
            let x = -0.5 + (j as f64 + 0.5) / 8.0;
            let z = HPoint::new(x, y).expect("valid sample point");
            peak = peak.max(f(z).abs());
        }
    }
    let tail = peak * peak / cutoff;
    if tail > ANALYZE_TOLERANCE {
        log::warn!("analyze: estimated mass {tail:e} above height {cutoff} exceeds {ANALYZE_TOLERANCE:e}");
    }
}

/// Default relative tolerance of the analysis transform.
pub const ANALYZE_TOLERANCE: f64 = 1e-3;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Arc<SpectralGrid> {
        Arc::new(SpectralGrid::build_default(Vec::new(), 6.0, 2).unwrap())
    }

    fn from_parts(g: &Arc<SpectralGrid>, parts: &[(f64, f64)]) -> CoeffFn {
        let values = (0..g.len())
            .map(|i| {
                let (a, b) = parts[i % parts.len()];
                Complex64::new(a, b) * (1.0 + i as f64).recip()
            })
            .collect();
        CoeffFn::new(g.clone(), values).unwrap()
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        let g = grid();
        for s in -4..=4 {
            assert_eq!(CoeffFn::zeros(g.clone()).norm_vs(SobolevIndex(s)), 0.0);
        }
    }

    #[test]
    fn residual_indicator_has_unit_norm() {
        let g = grid();
        let e = CoeffFn::residual_indicator(g);
        for s in -4..=4 {
            assert_eq!(e.norm_vs(SobolevIndex(s)), 1.0);
        }
        assert_eq!(e.pairing(&e).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mu_and_m_on_residual() {
        let g = grid();
        let e = CoeffFn::residual_indicator(g);
        assert_eq!(e.mu_apply().values(), e.values());
        assert_eq!(e.m_operator_apply().norm_vs(SobolevIndex(0)), 0.0);
        let r = e.resolvent_apply(1.0).unwrap();
        assert_eq!(r.values()[e.grid().residual_index()], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn resolvent_rejects_nonpositive_parameter() {
        let e = CoeffFn::residual_indicator(grid());
        assert!(e.resolvent_apply(0.0).is_err());
        assert!(e.resolvent_apply(-1.0).is_err());
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = CoeffFn::zeros(grid());
        let b = CoeffFn::zeros(grid());
        assert!(matches!(a.pairing(&b), Err(GridError::GridMismatch)));
    }

    #[test]
    fn constructor_validates() {
        let g = grid();
        assert!(CoeffFn::new(g.clone(), vec![Complex64::default(); 3]).is_err());
        let mut v = vec![Complex64::default(); g.len()];
        v[2] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(CoeffFn::new(g, v), Err(GridError::NonFinite { index: 2 })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pairing_is_hermitian(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64) {
            let g = grid();
            let f = from_parts(&g, &[(a, b), (c, d), (b, a)]);
            let h = from_parts(&g, &[(d, c), (a, -b)]);
            let p = f.pairing(&h).unwrap();
            let q = h.pairing(&f).unwrap();
            prop_assert!((p - q.conj()).norm() <= 1e-14 * (1.0 + p.norm()));
        }

        #[test]
        fn split_cauchy_schwarz(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, s in prop::sample::select(vec![-2, 0, 2])) {
            let g = grid();
            let f = from_parts(&g, &[(a, b), (c, 1.0)]);
            let h = from_parts(&g, &[(b, c), (1.0, a), (0.5, 0.5)]);
            let lhs = f.pairing(&h).unwrap().norm();
            let rhs = f.norm_vs(SobolevIndex(s)) * h.norm_vs(SobolevIndex(-s));
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn nesting(a in -3.0..3.0f64, b in -3.0..3.0f64, s in -4i32..4) {
            let g = grid();
            let f = from_parts(&g, &[(a, b), (b, 1.0)]);
            prop_assert!(f.norm_vs(SobolevIndex(s - 1)) <= f.norm_vs(SobolevIndex(s)) * (1.0 + 1e-14));
        }

        #[test]
        fn mu_is_isometric_and_invertible(a in -3.0..3.0f64, b in -3.0..3.0f64, s in -4i32..=4) {
            let g = grid();
            let f = from_parts(&g, &[(a, b), (1.0, a), (b, -0.3)]);
            let lhs = f.mu_apply().norm_vs(SobolevIndex(s - 2));
            let rhs = f.norm_vs(SobolevIndex(s));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
            let back = f.mu_apply().mu_inverse();
            for (x, y) in back.values().iter().zip(f.values()) {
                prop_assert!((x - y).norm() <= 1e-13 * y.norm().max(1e-300));
            }
        }
    }
}
