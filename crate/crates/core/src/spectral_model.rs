//! The discretized spectral parameter space: cusp forms, the residual
//! (constant) point and Gauss–Legendre nodes on the Eisenstein line, with
//! Plancherel weights, eigenvalues and Sobolev weights.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::automorphic::{constant_form_value, BasisFunction, EisensteinSeries, MaassFormData};
use crate::error::GridError;
use crate::quadrature::{geometric_edges, GaussLegendre};

/// Sobolev index ℓ used for the delta: the smallest integer above dim X / 2.
pub const ELL: i32 = 2;
/// Cusp parameters closer than this are treated as duplicates.
pub const DUPLICATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralKind {
    Cuspidal,
    Residual,
    Eisenstein,
}

/// An integer Sobolev index s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SobolevIndex(pub i32);

impl SobolevIndex {
    pub fn value(self) -> i32 {
        self.0
    }
}

impl From<i32> for SobolevIndex {
    fn from(s: i32) -> Self {
        SobolevIndex(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub kind: SpectralKind,
    pub r: f64,
    pub eigenvalue: f64,
    /// Φ̄_ξ(i)
    pub basepoint_value: Complex64,
}

impl SpectralPoint {
    pub fn residual() -> Self {
        Self {
            kind: SpectralKind::Residual,
            r: 0.0,
            eigenvalue: 0.0,
            basepoint_value: Complex64::new(constant_form_value(), 0.0),
        }
    }

    pub fn with_parameter(kind: SpectralKind, r: f64, basepoint_value: Complex64) -> Self {
        let eigenvalue = match kind {
            SpectralKind::Residual => 0.0,
            _ => -(0.25 + r * r),
        };
        Self {
            kind,
            r,
            eigenvalue,
            basepoint_value,
        }
    }

    pub fn eigenvalue(&self) -> f64 {
        eigenvalue(self)
    }

    pub fn sobolev_weight(&self, s: SobolevIndex) -> f64 {
        sobolev_weight(self, s)
    }
}

/// λ_ξ ≤ 0: zero on the residual point, −(1/4 + r²) elsewhere.
pub fn eigenvalue(p: &SpectralPoint) -> f64 {
    match p.kind {
        SpectralKind::Residual => 0.0,
        SpectralKind::Cuspidal | SpectralKind::Eisenstein => -(0.25 + p.r * p.r),
    }
}

/// (1 − λ_ξ)^s, the squared-norm weight of V^s.
pub fn sobolev_weight(p: &SpectralPoint, s: SobolevIndex) -> f64 {
    (1.0 - eigenvalue(p)).powi(s.0)
}

/// Discretization parameters for the Eisenstein line.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub r_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Width ratio of consecutive panels; > 1 clusters nodes near r = 0.
    pub panel_ratio: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_max: 12.0,
            panels: 6,
            nodes_per_panel: 32,
            panel_ratio: 1.4,
        }
    }
}

impl GridConfig {
    pub fn with_r_max(r_max: f64) -> Self {
        Self {
            r_max,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct EisensteinNode {
    pub point: SpectralPoint,
    /// Quadrature weight including the folded Plancherel factor 1/(2π).
    pub weight: f64,
    pub series: EisensteinSeries,
}

/// The finite spectral grid. Coefficient vectors are ordered as
/// cusp points, then the residual point, then Eisenstein nodes.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    cusp_points: Vec<SpectralPoint>,
    cusp_forms: Vec<Arc<MaassFormData>>,
    residual_point: SpectralPoint,
    eisenstein_nodes: Vec<EisensteinNode>,
    config: GridConfig,
}

impl SpectralGrid {
    /// Builds the grid; cusp forms are taken as given (normalize them first).
    pub fn build(cusp_data: Vec<MaassFormData>, config: GridConfig) -> Result<Self, GridError> {
        validate_config(&config)?;
        let mut cusp_data = cusp_data;
        cusp_data.sort_by(|a, b| a.r.total_cmp(&b.r));
        for w in cusp_data.windows(2) {
            if (w[1].r - w[0].r).abs() <= DUPLICATE_TOLERANCE {
                return Err(GridError::DuplicateCuspParameter(w[1].r));
            }
        }
        let mut cusp_points = Vec::with_capacity(cusp_data.len());
        let mut cusp_forms = Vec::with_capacity(cusp_data.len());
        for f in cusp_data {
            let f = Arc::new(f);
            let value = BasisFunction::Cusp(f.clone()).basepoint_value()?;
            cusp_points.push(SpectralPoint::with_parameter(SpectralKind::Cuspidal, f.r, value));
            cusp_forms.push(f);
        }
        Ok(Self {
            cusp_points,
            cusp_forms,
            residual_point: SpectralPoint::residual(),
            eisenstein_nodes: eisenstein_nodes(&config)?,
            config,
        })
    }

    /// Same cusp forms, new Eisenstein discretization.
    pub fn rebuild(&self, config: GridConfig) -> Result<Self, GridError> {
        validate_config(&config)?;
        Ok(Self {
            cusp_points: self.cusp_points.clone(),
            cusp_forms: self.cusp_forms.clone(),
            residual_point: self.residual_point,
            eisenstein_nodes: eisenstein_nodes(&config)?,
            config,
        })
    }

    /// Grid with the default panel layout.
    pub fn build_default(cusp_data: Vec<MaassFormData>, r_max: f64, panels: usize) -> Result<Self, GridError> {
        Self::build(
            cusp_data,
            GridConfig {
                r_max,
                panels,
                ..GridConfig::default()
            },
        )
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn r_max(&self) -> f64 {
        self.config.r_max
    }

    pub fn cusp_points(&self) -> &[SpectralPoint] {
        &self.cusp_points
    }

    pub fn cusp_forms(&self) -> &[Arc<MaassFormData>] {
        &self.cusp_forms
    }

    pub fn residual_point(&self) -> &SpectralPoint {
        &self.residual_point
    }

    pub fn eisenstein_nodes(&self) -> &[EisensteinNode] {
        &self.eisenstein_nodes
    }

    pub fn len(&self) -> usize {
        self.cusp_points.len() + 1 + self.eisenstein_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn residual_index(&self) -> usize {
        self.cusp_points.len()
    }

    pub fn eisenstein_offset(&self) -> usize {
        self.cusp_points.len() + 1
    }

    /// All points in coefficient order.
    pub fn points(&self) -> impl Iterator<Item = &SpectralPoint> + '_ {
        self.cusp_points
            .iter()
            .chain(std::iter::once(&self.residual_point))
            .chain(self.eisenstein_nodes.iter().map(|n| &n.point))
    }

    /// Measure weights in coefficient order: 1 on discrete points.
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::repeat(1.0)
            .take(self.cusp_points.len() + 1)
            .chain(self.eisenstein_nodes.iter().map(|n| n.weight))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.points().map(eigenvalue).collect()
    }

    /// Basis functions in coefficient order.
    pub fn basis(&self) -> Vec<BasisFunction> {
        self.cusp_forms
            .iter()
            .map(|f| BasisFunction::Cusp(f.clone()))
            .chain(std::iter::once(BasisFunction::Constant))
            .chain(self.eisenstein_nodes.iter().map(|n| BasisFunction::Eisenstein(n.series)))
            .collect()
    }

    /// Σ w_j g(r_j) over the Eisenstein nodes: (1/2π)∫₀^{r_max} g dr.
    pub fn integrate_eisenstein<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.eisenstein_nodes.iter().map(|n| n.weight * g(n.point.r)).sum()
    }
}


fn validate_config(config: &GridConfig) -> Result<(), GridError> {
    if !(config.r_max > 0.0) || !config.r_max.is_finite() {
        return Err(GridError::NonPositiveRMax(config.r_max));
    }
    if config.panels == 0 || config.nodes_per_panel == 0 {
        return Err(GridError::EmptyQuadrature);
    }
    Ok(())
}

fn eisenstein_nodes(config: &GridConfig) -> Result<Vec<EisensteinNode>, GridError> {
    let rule = GaussLegendre::new(config.nodes_per_panel);
    let edges = geometric_edges(config.r_max, config.panels, config.panel_ratio);
    let mut eisenstein_nodes = Vec::with_capacity(config.panels * config.nodes_per_panel);
    for e in edges.windows(2) {
        for (r, w) in rule.mapped(e[0], e[1]) {
            let series = EisensteinSeries::new(r)?;
            let value = BasisFunction::Eisenstein(series).basepoint_value()?;
            eisenstein_nodes.push(EisensteinNode {
                point: SpectralPoint::with_parameter(SpectralKind::Eisenstein, r, value),
                weight: w / (2.0 * PI),
                series,
            });
        }
    }
    Ok(eisenstein_nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bare_grid(r_max: f64, panels: usize) -> SpectralGrid {
        SpectralGrid::build_default(Vec::new(), r_max, panels).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(&SpectralPoint::residual()), 0.0);
        let e0 = SpectralPoint::with_parameter(SpectralKind::Eisenstein, 0.0, Complex64::default());
        assert_eq!(e0.eigenvalue(), -0.25);
        let r = 9.53369526135_f64;
        let c = SpectralPoint::with_parameter(SpectralKind::Cuspidal, r, Complex64::default());
        assert!((c.eigenvalue() - (-0.25 - r * r)).abs() < 1e-12);
        assert!((c.eigenvalue() + 91.1413).abs() < 1e-4);
    }

    #[test]
    fn sobolev_weight_examples() {
        let res = SpectralPoint::residual();
        for s in -6..=6 {
            assert_eq!(res.sobolev_weight(SobolevIndex(s)), 1.0);
        }
        let e0 = SpectralPoint::with_parameter(SpectralKind::Eisenstein, 0.0, Complex64::default());
        assert!((e0.sobolev_weight(SobolevIndex(-2)) - 0.64).abs() < 1e-15);
        let r = 9.53369526135_f64;
        let c = SpectralPoint::with_parameter(SpectralKind::Cuspidal, r, Complex64::default());
        let want = (1.25 + r * r).powi(2);
        assert!((c.sobolev_weight(SobolevIndex(2)) - want).abs() < 1e-9);
        assert!((want - 8490.0).abs() < 0.5);
    }

    #[test]
    fn structural_grid() {
        let g = bare_grid(10.0, 4);
        assert_eq!(g.cusp_points().len(), 0);
        assert_eq!(g.eisenstein_nodes().len(), 4 * 32);
        assert_eq!(g.len(), 1 + 128);
        assert_eq!(g.residual_index(), 0);
    }

    #[test]
    fn weights_reproduce_folded_plancherel_length() {
        let g = bare_grid(10.0, 4);
        let total: f64 = g.eisenstein_nodes().iter().map(|n| n.weight).sum();
        assert!((total - 10.0 / (2.0 * PI)).abs() < 1e-13);
        assert!((total - 1.59155).abs() < 1e-5);
    }

    #[test]
    fn nodes_increasing_with_positive_weights() {
        let g = bare_grid(12.0, 6);
        let nodes = g.eisenstein_nodes();
        assert!(nodes.iter().all(|n| n.weight > 0.0));
        assert!(nodes.windows(2).all(|w| w[0].point.r < w[1].point.r));
        assert!(nodes[0].point.r > 0.0 && nodes.last().unwrap().point.r <= 12.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            SpectralGrid::build_default(Vec::new(), 0.0, 4),
            Err(GridError::NonPositiveRMax(_))
        ));
        assert!(SpectralGrid::build_default(Vec::new(), -1.0, 4).is_err());
        assert!(SpectralGrid::build_default(Vec::new(), 5.0, 0).is_err());
    }

    #[test]
    fn rejects_duplicate_cusp_parameters() {
        let coeffs = vec![1.0; 12];
        let a = MaassFormData::new(9.5, crate::automorphic::Parity::Odd, coeffs.clone(), "a");
        let b = MaassFormData::new(9.5 + 1e-12, crate::automorphic::Parity::Odd, coeffs, "b");
        assert!(matches!(
            SpectralGrid::build_default(vec![a, b], 12.0, 4),
            Err(GridError::DuplicateCuspParameter(_))
        ));
    }

    #[test]
    fn refinement_changes_smooth_integral_little() {
        let g = |r: f64| (-(0.25 + r * r) * 0.5).exp() * (1.0 + r).ln();
        let coarse = bare_grid(12.0, 6).integrate_eisenstein(g);
        let fine = bare_grid(12.0, 12).integrate_eisenstein(g);
        assert!((coarse - fine).abs() < 1e-13, "{coarse} vs {fine}");
    }
}
