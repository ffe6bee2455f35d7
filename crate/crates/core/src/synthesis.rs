//! Physical-side synthesis: pointwise values of Σ_ξ w f(ξ) Φ_ξ(z), the heat
//! kernel U(t)(z), and smoothness/tail diagnostics.

use std::sync::Arc;

use num_complex::Complex64;

use crate::automorphic::{constant_form_value, BasisFunction, HPoint};
use crate::error::{GridError, HeatError};
use crate::fundamental_domain::QuadSpec;
use crate::heat::heat_coefficients;
use crate::sobolev::CoeffFn;
use crate::spectral_model::{GridConfig, SobolevIndex, SpectralGrid, SpectralKind};

/// Relative size of the omitted r > r_max contribution that raises a warning.
pub const TAIL_TOLERANCE: f64 = 1e-6;

/// Relative change allowed under r_max doubling in [`smoothness_profile`].
pub const STABILITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisReport {
    pub value: Complex64,
    pub cusp_part: Complex64,
    pub residual_part: Complex64,
    pub eisenstein_part: Complex64,
    pub tail_estimate: f64,
    pub nodes_used: usize,
    pub tail_warning: bool,
}

/// The three parts of Σ w f(ξ) Φ_ξ(z) at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SynthesisParts {
    pub cusp: Complex64,
    pub residual: Complex64,
    pub eisenstein: Complex64,
}

impl SynthesisParts {
    pub fn total(&self) -> Complex64 {
        self.cusp + self.residual + self.eisenstein
    }
}

/// Σ w f(ξ) Φ_ξ(z); z is reduced into F first.
pub fn synthesize(f: &CoeffFn, z: HPoint) -> Result<SynthesisParts, GridError> {
    let grid = f.grid();
    let z = z.reduce();
    let mut parts = SynthesisParts::default();
    for ((point, w), (phi, c)) in grid
        .points()
        .zip(grid.weights())
        .zip(grid.basis().iter().zip(f.values()))
    {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let term = c * (w * phi.eval(z)?);
        match point.kind {
            SpectralKind::Cuspidal => parts.cusp += term,
            SpectralKind::Residual => parts.residual += term,
            SpectralKind::Eisenstein => parts.eisenstein += term,
        }
    }
    Ok(parts)
}

/// Σ w f(ξ) Φ_ξ on a row of height y (no reduction), using spectral points
/// with r ≤ `r_cut` only.
pub fn synthesize_row(f: &CoeffFn, y: f64, xs: &[f64], r_cut: f64) -> Result<Vec<Complex64>, GridError> {
    let grid = f.grid();
    let mut out = vec![Complex64::new(0.0, 0.0); xs.len()];
    for ((point, w), (phi, c)) in grid
        .points()
        .zip(grid.weights())
        .zip(grid.basis().iter().zip(f.values()))
    {
        if point.r > r_cut || *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (o, v) in out.iter_mut().zip(phi.eval_row(y, xs)?) {
            *o += c * (w * v);
        }
    }
    Ok(out)
}

/// U(t)(z) = Σ Φ̄_ξ(i) e^{λt} Φ_ξ(z) dξ on the grid, with a tail bound.
pub fn evaluate_heat_kernel(t: f64, z: HPoint, grid: &Arc<SpectralGrid>) -> Result<SynthesisReport, HeatError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(HeatError::BadTime { t, requirement: "t > 0" });
    }
    let u = heat_coefficients(t, grid)?.coeffs;
    let parts = synthesize(&u, z)?;
    let value = parts.total();
    let tail_estimate = eisenstein_tail_bound(t, z, grid)?;
    Ok(SynthesisReport {
        value,
        cusp_part: parts.cusp,
        residual_part: parts.residual,
        eisenstein_part: parts.eisenstein,
        tail_estimate,
        nodes_used: grid.len(),
        tail_warning: tail_estimate > TAIL_TOLERANCE * value.norm().max(f64::MIN_POSITIVE),
    })
}

/// (1/2π)∫_{r_max}^∞ A e^{−(1/4+r²)t} dr, with A twice the largest
/// |E♮(i)E♮(z)| sampled on the upper half of the node range.
fn eisenstein_tail_bound(t: f64, z: HPoint, grid: &SpectralGrid) -> Result<f64, HeatError> {
    let r_max = grid.r_max();
    let z = z.reduce();
    let mut amplitude: f64 = 0.0;
    for node in grid.eisenstein_nodes().iter().filter(|n| n.point.r >= 0.5 * r_max) {
        let at_z = node.series.eval_rotated_auto(z)?;
        amplitude = amplitude.max((node.point.basepoint_value.re * at_z).abs());
    }
    let a = r_max * t.sqrt();
    // ∫_a^∞ e^{−u²} du ≤ min(√π/2, e^{−a²}/(2a))
    let gauss = if a > 0.0 {
        (0.5 * std::f64::consts::PI.sqrt()).min((-a * a).exp() / (2.0 * a))
    } else {
        0.5 * std::f64::consts::PI.sqrt()
    };
    let tail = 2.0 * amplitude * (-0.25 * t).exp() * gauss / t.sqrt() / (2.0 * std::f64::consts::PI);
    Ok(tail)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessProfile {
    pub t: f64,
    /// (s, ‖Ũ(t)‖_{V^s}) on the given grid.
    pub norms: Vec<(SobolevIndex, f64)>,
    /// The same norms with r_max doubled.
    pub doubled: Vec<f64>,
    pub max_relative_change: f64,
    pub stable: bool,
}

/// ‖Ũ(t)‖_{V^s} for each s, and whether they survive doubling r_max.
/// t = 0 is accepted here to exhibit δ ∉ V^0.
pub fn smoothness_profile(
    t: f64,
    s_list: &[SobolevIndex],
    grid: &Arc<SpectralGrid>,
) -> Result<SmoothnessProfile, HeatError> {
    let doubled_grid = Arc::new(grid.rebuild(GridConfig {
        r_max: 2.0 * grid.r_max(),
        ..grid.config().clone()
    })?);
    let u = heat_coefficients(t, grid)?.coeffs;
    let u2 = heat_coefficients(t, &doubled_grid)?.coeffs;
    let norms: Vec<(SobolevIndex, f64)> = s_list.iter().map(|&s| (s, u.norm_vs(s))).collect();
    let doubled: Vec<f64> = s_list.iter().map(|&s| u2.norm_vs(s)).collect();
    let max_relative_change = norms
        .iter()
        .zip(&doubled)
        .map(|((_, a), b)| (a - b).abs() / a.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(SmoothnessProfile {
        t,
        norms,
        doubled,
        max_relative_change,
        stable: max_relative_change <= STABILITY_TOLERANCE,
    })
}

/// ‖f‖_{V^s} restricted to the Eisenstein nodes with r > r_cut.
pub fn norm_tail(f: &CoeffFn, r_cut: f64, s: SobolevIndex) -> f64 {
    let grid = f.grid();
    grid.points()
        .zip(grid.weights())
        .zip(f.values())
        .filter(|((p, _), _)| p.r > r_cut)
        .map(|((p, w), v)| w * p.sobolev_weight(s) * v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest difference of value and of the x- and y-derivatives between the
/// syntheses truncated at r_max and at r_max/2, over a patch of rows.
pub fn partial_synthesis_c1_gap(f: &CoeffFn, ys: &[f64], xs: &[f64]) -> Result<f64, GridError> {
    let r_max = f.grid().r_max();
    let h = 1e-4;
    let mut gap: f64 = 0.0;
    for &y in ys {
        let mut rows = Vec::with_capacity(3);
        for yy in [y - h, y, y + h] {
            let full = synthesize_row(f, yy, xs, r_max)?;
            let half = synthesize_row(f, yy, xs, 0.5 * r_max)?;
            rows.push(full.iter().zip(&half).map(|(a, b)| a - b).collect::<Vec<_>>());
        }
        let mid = &rows[1];
        for (k, v) in mid.iter().enumerate() {
            gap = gap.max(v.norm());
            gap = gap.max(((rows[2][k] - rows[0][k]) / (2.0 * h)).norm());
        }
        let shifted: Vec<f64> = xs.iter().map(|x| x + h).collect();
        let full = synthesize_row(f, y, &shifted, r_max)?;
        let half = synthesize_row(f, y, &shifted, 0.5 * r_max)?;
        for (k, (a, b)) in full.iter().zip(&half).enumerate() {
            gap = gap.max(((a - b - mid[k]) / h).norm());
        }
    }
    Ok(gap)
}

/// ⟨U(t), Φ₀⟩ computed on the physical side: synthesize U(t) on the
/// fundamental-domain nodes and integrate against the constant form.
pub fn physical_mass(t: f64, grid: &Arc<SpectralGrid>, spec: &QuadSpec) -> Result<f64, HeatError> {
    let u = heat_coefficients(t, grid)?.coeffs;
    let mut total = 0.0;
    for row in spec.rows() {
        let xs: Vec<f64> = row.points.iter().map(|p| p.0).collect();
        let vals = synthesize_row(&u, row.y, &xs, f64::INFINITY)?;
        total += row.points.iter().zip(&vals).map(|((_, w), v)| w * v.re).sum::<f64>();
    }
    Ok(total * constant_form_value())
}

/// Φ_ξ(z) for every grid point, in coefficient order.
pub fn basis_values(grid: &SpectralGrid, z: HPoint) -> Result<Vec<f64>, GridError> {
    let z = z.reduce();
    grid.basis()
        .iter()
        .map(|phi: &BasisFunction| phi.eval(z).map_err(GridError::from))
        .collect()
}
