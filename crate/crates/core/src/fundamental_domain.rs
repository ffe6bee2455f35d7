//! Quadrature over the fundamental domain F = {|x| ≤ 1/2, x² + y² ≥ 1} for
//! the invariant measure dx dy / y².
//!
//! F is split at y = 1. The cusp part {y ≥ 1} is integrated in v = 1/y, where
//! dx dy/y² = dx dv and v ∈ (0, 1]; the sliver between the arc and y = 1 is
//! integrated column by column with the arc as the exact lower limit.

use crate::quadrature::{geometric_edges, uniform_edges, GaussLegendre};

/// One quadrature node: position and weight (measure included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainNode {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

/// Nodes sharing one height y, as (x, weight) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainRow {
    pub y: f64,
    pub points: Vec<(f64, f64)>,
}

/// Parameters of the fundamental-domain rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSpec {
    /// x panels and nodes per panel on [−1/2, 1/2]
    pub x_panels: usize,
    pub x_nodes: usize,
    /// v = 1/y panels and nodes per panel on the cusp part
    pub cusp_panels: usize,
    pub cusp_nodes: usize,
    /// width ratio of successive v panels, smallest at the cusp; 1 is uniform
    pub cusp_ratio: f64,
    /// nodes per column in the sliver below y = 1
    pub sliver_nodes: usize,
    /// Optional height cutoff Y; `None` integrates all the way into the cusp.
    pub height_cutoff: Option<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            x_panels: 2,
            x_nodes: 24,
            cusp_panels: 3,
            cusp_nodes: 20,
            cusp_ratio: 1.0,
            sliver_nodes: 12,
            height_cutoff: None,
        }
    }
}

impl QuadSpec {
    pub fn coarse() -> Self {
        Self {
            x_panels: 2,
            x_nodes: 16,
            cusp_panels: 2,
            cusp_nodes: 16,
            cusp_ratio: 1.0,
            sliver_nodes: 8,
            height_cutoff: None,
        }
    }

    /// Nodes grouped by height: every row shares one y, so functions whose
    /// cost is dominated by y-dependent factors can be evaluated per row.
    pub fn rows(&self) -> Vec<DomainRow> {
        let x_rule = GaussLegendre::new(self.x_nodes);
        let v_rule = GaussLegendre::new(self.cusp_nodes);
        let s_rule = GaussLegendre::new(self.sliver_nodes);
        let xs: Vec<(f64, f64)> = uniform_edges(-0.5, 0.5, self.x_panels)
            .windows(2)
            .flat_map(|e| x_rule.mapped(e[0], e[1]).collect::<Vec<_>>())
            .collect();
        let v_min = self.height_cutoff.map_or(0.0, |h| 1.0 / h);
        let mut rows = Vec::new();
        let v_edges: Vec<f64> = geometric_edges(1.0 - v_min, self.cusp_panels, self.cusp_ratio)
            .into_iter()
            .map(|v| v_min + v)
            .collect();
        for e in v_edges.windows(2) {
            for (v, wv) in v_rule.mapped(e[0], e[1]) {
                rows.push(DomainRow {
                    y: 1.0 / v,
                    points: xs.iter().map(|&(x, wx)| (x, wx * wv)).collect(),
                });
            }
        }
        for &(x, wx) in &xs {
            let arc = (1.0 - x * x).sqrt();
            for (y, wy) in s_rule.mapped(arc, 1.0) {
                rows.push(DomainRow {
                    y,
                    points: vec![(x, wx * wy / (y * y))],
                });
            }
        }
        rows
    }

    pub fn nodes(&self) -> Vec<DomainNode> {
        self.rows()
            .into_iter()
            .flat_map(|row| {
                let y = row.y;
                row.points
                    .into_iter()
                    .map(move |(x, weight)| DomainNode { x, y, weight })
            })
            .collect()
    }
}

/// ∫_F f dμ with the given rule.
pub fn integrate<F: Fn(f64, f64) -> f64>(nodes: &[DomainNode], f: F) -> f64 {
    nodes.iter().map(|n| n.weight * f(n.x, n.y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn volume_is_pi_over_three() {
        let nodes = QuadSpec::default().nodes();
        let vol = integrate(&nodes, |_, _| 1.0);
        assert!((vol - PI / 3.0).abs() < 1e-13, "{vol}");
    }

    #[test]
    fn height_cutoff_removes_cusp_volume() {
        let spec = QuadSpec {
            height_cutoff: Some(10.0),
            ..QuadSpec::default()
        };
        let vol = integrate(&spec.nodes(), |_, _| 1.0);
        assert!((vol - (PI / 3.0 - 0.1)).abs() < 1e-13);
    }

    #[test]
    fn graded_cusp_panels() {
        let spec = QuadSpec {
            cusp_panels: 24,
            cusp_ratio: 2.0,
            ..QuadSpec::default()
        };
        let nodes = spec.nodes();
        assert!((integrate(&nodes, |_, _| 1.0) - PI / 3.0).abs() < 1e-13);
        // ∫_{y>1} y^{1/2} dx dy/y² = 2, singular like v^{−1/2} in v = 1/y
        let cusp = integrate(&nodes, |_, y| if y > 1.0 { y.sqrt() } else { 0.0 });
        assert!((cusp - 2.0).abs() < 1e-3, "{cusp}");
    }

    #[test]
    fn nodes_lie_in_domain() {
        for n in QuadSpec::coarse().nodes() {
            assert!(n.x.abs() <= 0.5 && n.x * n.x + n.y * n.y >= 1.0 - 1e-14);
            assert!(n.weight > 0.0);
        }
    }

    #[test]
    fn integrates_smooth_function() {
        // ∫_F y^{-1} dμ = ∫ dx ∫_{√(1−x²)}^∞ y^{-3} dy = ∫ dx / (2(1 − x²))
        let want = 0.5 * 3f64.ln();
        let got = integrate(&QuadSpec::default().nodes(), |_, y| 1.0 / y);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}
