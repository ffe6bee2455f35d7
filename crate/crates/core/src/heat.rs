//! The spectral-side heat flow: Ũ(t) = Fδ·e^{λt}, the semigroup G(t), the
//! heat-equation residual, the initial-condition gap, and uniqueness checks.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::HeatError;
use crate::quadrature::{geometric_edges, GaussLegendre};
use crate::sobolev::{delta_coefficients, CoeffFn};
use crate::spectral_model::{SobolevIndex, SpectralGrid};

/// Default index for residual checks.
pub const RESIDUAL_INDEX: SobolevIndex = SobolevIndex(-4);

/// Exponentials below this are flushed to zero.
const FLUSH_BELOW: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct HeatState {
    pub t: f64,
    pub coeffs: CoeffFn,
}

/// e^{λt} for λ ≤ 0, t ≥ 0, flushed to 0 under 1e−300.
pub fn decay_factor(lambda: f64, t: f64) -> f64 {
    let v = (-lambda.abs() * t).exp();
    if v < FLUSH_BELOW {
        0.0
    } else {
        v
    }
}

fn check_nonnegative(t: f64) -> Result<(), HeatError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatError::BadTime {
            t,
            requirement: "t >= 0",
        })
    }
}

fn check_positive(t: f64) -> Result<(), HeatError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatError::BadTime { t, requirement: "t > 0" })
    }
}

/// G(t)f: pointwise e^{λt} f.
pub fn semigroup_apply(t: f64, f: &CoeffFn) -> Result<CoeffFn, HeatError> {
    check_nonnegative(t)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_with_eigenvalue(|lam, v| v * decay_factor(lam, t)))
}

/// Ũ(t) = G(t)Fδ.
pub fn heat_coefficients(t: f64, grid: &Arc<SpectralGrid>) -> Result<HeatState, HeatError> {
    let coeffs = semigroup_apply(t, &delta_coefficients(grid))?;
    Ok(HeatState { t, coeffs })
}

/// ‖(Ũ(t+h) − Ũ(t−h))/2h − MŨ(t)‖_{V^s}.
pub fn heat_equation_residual(
    grid: &Arc<SpectralGrid>,
    t: f64,
    h: f64,
    s: SobolevIndex,
) -> Result<f64, HeatError> {
    check_positive(t)?;
    if !(h > 0.0 && h < t) {
        return Err(HeatError::BadStep { t, h });
    }
    let plus = heat_coefficients(t + h, grid)?.coeffs;
    let minus = heat_coefficients(t - h, grid)?.coeffs;
    let now = heat_coefficients(t, grid)?.coeffs;
    let diff = plus.try_sub(&minus)?.scale(Complex64::new(0.5 / h, 0.0));
    Ok(diff.try_sub(&now.m_operator_apply())?.norm_vs(s))
}

/// ‖Ũ(t) − Fδ‖_{V^{−2}}.
pub fn initial_condition_gap(grid: &Arc<SpectralGrid>, t: f64) -> Result<f64, HeatError> {
    check_positive(t)?;
    let delta = delta_coefficients(grid);
    let u = semigroup_apply(t, &delta)?;
    Ok(u.try_sub(&delta)?.norm_vs(SobolevIndex(-2)))
}

/// ‖G(t)f0 − G(t)g0‖_{V^s}.
pub fn acp_uniqueness_gap(f0: &CoeffFn, g0: &CoeffFn, t: f64, s: SobolevIndex) -> Result<f64, HeatError> {
    check_positive(t)?;
    let d = f0.try_sub(g0)?;
    Ok(semigroup_apply(t, &d)?.norm_vs(s))
}

/// Backward Euler for y' = My over [0, t] in `steps` steps. Unconditionally
/// stable, so the step need not resolve the largest |λ| on the grid.
pub fn euler_solve(f0: &CoeffFn, t: f64, steps: usize) -> Result<CoeffFn, HeatError> {
    check_nonnegative(t)?;
    if steps == 0 {
        return Err(HeatError::BadStep { t, h: 0.0 });
    }
    let k = t / steps as f64;
    let mut y = f0.clone();
    for _ in 0..steps {
        y = y.map_with_eigenvalue(|lam, v| v / (1.0 - k * lam));
    }
    Ok(y)
}

/// ‖euler_solve(f0, t, steps) − G(t)f0‖_{V^s}.
pub fn euler_error(f0: &CoeffFn, t: f64, steps: usize, s: SobolevIndex) -> Result<f64, HeatError> {
    let approx = euler_solve(f0, t, steps)?;
    let exact = semigroup_apply(t, f0)?;
    Ok(approx.try_sub(&exact)?.norm_vs(s))
}

/// −∫₀^∞ e^{−Ct} G(t)f dt by Gauss–Legendre on geometric panels in t.
pub fn resolvent_via_laplace(c: f64, f: &CoeffFn, panels: usize, nodes: usize) -> Result<CoeffFn, HeatError> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(HeatError::BadResolvent(c));
    }
    let horizon = 40.0 / c;
    let rule = GaussLegendre::new(nodes);
    // panels shrink towards t = 0 where large |λ| decay happens
    let edges: Vec<f64> = geometric_edges(horizon, panels, 2.0);
    let mut acc = CoeffFn::zeros(f.grid().clone());
    for e in edges.windows(2) {
        for (t, w) in rule.mapped(e[0], e[1]) {
            let g = semigroup_apply(t, f)?;
            acc = acc.axpy(Complex64::new(-w * (-c * t).exp(), 0.0), &g)?;
        }
    }
    Ok(acc)
}
