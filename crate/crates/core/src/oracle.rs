//! The periodization oracle: U(t)(z) = Σ_{γ ∈ PSL₂(ℤ)} p_t(d(z, γi)) with
//! the explicit heat kernel p_t of the hyperbolic plane.

use std::f64::consts::PI;

use crate::automorphic::HPoint;
use crate::error::HeatError;
use crate::quadrature::GaussLegendre;

/// Allowed time range of the oracle.
pub const TIME_RANGE: (f64, f64) = (0.2, 10.0);

/// Smallest accepted Frobenius norm bound.
pub const MIN_NORM_BOUND: f64 = 4.0;

/// Relative contribution of the outer shell ‖γ‖ ∈ [B−1, B] that triggers a warning.
pub const SHELL_TOLERANCE: f64 = 1e-3;

const GAUSS_CUTOFF: f64 = 60.0;
const TABLE_STEP: f64 = 1.0 / 64.0;

/// ln p_t(ρ), where
/// p_t(ρ) = √2 e^{−t/4} (4πt)^{−3/2} ∫_ρ^∞ s e^{−s²/4t} (cosh s − cosh ρ)^{−1/2} ds.
///
/// Near the endpoint the integral is taken in w with cosh s = cosh ρ + w²,
/// which turns the integrand into 2s e^{−s²/4t}/sinh s, analytic in w for
/// every ρ ≥ 0 including ρ = 0.
pub fn ln_heat_kernel_h2(t: f64, rho: f64) -> f64 {
    assert!(t > 0.0 && rho >= 0.0, "ln_heat_kernel_h2 needs t > 0, ρ ≥ 0");
    let rule = GaussLegendre::new(24);
    let s_max = (rho * rho + 4.0 * t * GAUSS_CUTOFF).sqrt();
    let s1 = (rho + 1.0).min(s_max);
    let gauss = |s: f64| (-(s * s - rho * rho) / (4.0 * t)).exp();

    let base = 2.0 * (0.5 * rho).sinh().powi(2);
    let w1 = (2.0 * (0.5 * (s1 + rho)).sinh() * (0.5 * (s1 - rho)).sinh()).sqrt();
    let near = rule.integrate_panels(&[0.0, 0.5 * w1, w1], |w| {
        let eps = base + w * w;
        let sinh_s = (eps * (2.0 + eps)).sqrt();
        let s = (eps + sinh_s).ln_1p();
        let ratio = if sinh_s > 0.0 { s / sinh_s } else { 1.0 };
        2.0 * ratio * gauss(s)
    });

    let far = if s_max > s1 {
        let panels = ((s_max - s1) / t.sqrt()).ceil().clamp(1.0, 40.0) as usize;
        let edges: Vec<f64> = (0..=panels)
            .map(|k| s1 + (s_max - s1) * k as f64 / panels as f64)
            .collect();
        rule.integrate_panels(&edges, |s| {
            let denom = (2.0 * (0.5 * (s + rho)).sinh() * (0.5 * (s - rho)).sinh()).sqrt();
            s * gauss(s) / denom
        })
    } else {
        0.0
    };

    let ln_prefactor = 0.5 * 2f64.ln() - 0.25 * t - 1.5 * (4.0 * PI * t).ln();
    ln_prefactor - rho * rho / (4.0 * t) + (near + far).ln()
}

pub fn heat_kernel_h2(t: f64, rho: f64) -> f64 {
    ln_heat_kernel_h2(t, rho).exp()
}

/// ln p_t tabulated against η = ln cosh ρ on a uniform grid, with four-point
/// Lagrange interpolation; falls back to direct quadrature past the end.
/// p_t is analytic in cosh ρ, so it is smooth in η down to η = 0.
#[derive(Debug, Clone)]
pub struct HeatKernelTable {
    t: f64,
    ln_values: Vec<f64>,
}

impl HeatKernelTable {
    /// Table covering ρ ≤ rho_max.
    pub fn new(t: f64, rho_max: f64) -> Self {
        let eta_max = rho_max.cosh().ln();
        let n = (eta_max / TABLE_STEP).ceil() as usize + 4;
        let ln_values = (0..n)
            .map(|k| ln_heat_kernel_h2(t, (k as f64 * TABLE_STEP).exp().acosh()).max(-1e4))
            .collect();
        Self { t, ln_values }
    }

    pub fn eval(&self, rho: f64) -> f64 {
        self.eval_log_cosh(rho.cosh().ln())
    }

    /// p_t at ln cosh ρ = eta.
    pub fn eval_log_cosh(&self, eta: f64) -> f64 {
        let u = eta / TABLE_STEP;
        let k = u as usize;
        if k + 2 >= self.ln_values.len() {
            return heat_kernel_h2(self.t, eta.exp().acosh());
        }
        let k0 = k.max(1) - 1;
        let f = u - k0 as f64;
        let y = &self.ln_values[k0..k0 + 4];
        // Lagrange on nodes 0, 1, 2, 3
        let l0 = -(f - 1.0) * (f - 2.0) * (f - 3.0) / 6.0;
        let l1 = f * (f - 2.0) * (f - 3.0) / 2.0;
        let l2 = -f * (f - 1.0) * (f - 3.0) / 2.0;
        let l3 = f * (f - 1.0) * (f - 2.0) / 6.0;
        (l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3]).exp()
    }
}

/// cosh d(z, w) − 1.
#[inline]
fn cosh_distance_minus_one(x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    let dx = x1 - x2;
    let dy = y1 - y2;
    (dx * dx + dy * dy) / (2.0 * y1 * y2)
}

/// (g, x, y) with c·x + d·y = g = gcd(c, d) ≥ 0.
fn extended_gcd(c: i64, d: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (c, d);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Calls `visit(a, b, c, d)` once for every element of PSL₂(ℤ) with
/// a² + b² + c² + d² ≤ bound². Representatives have c > 0, or c = 0 and d = 1.
pub fn for_each_element<F: FnMut(i64, i64, i64, i64)>(bound: f64, mut visit: F) {
    let b2 = (bound * bound).floor() as i64;
    let c_max = bound.floor() as i64;
    // c = 0: (1 k; 0 1)
    let k_max = ((b2 - 2).max(0) as f64).sqrt().floor() as i64;
    for k in -k_max..=k_max {
        if 2 + k * k <= b2 {
            visit(1, k, 0, 1);
        }
    }
    for c in 1..=c_max {
        let d_max = (((b2 - c * c).max(0)) as f64).sqrt().floor() as i64;
        if 2 * d_max + 1 > c {
            // one Bezout computation per residue class of d mod c
            for r in 0..c {
                let (g, x, y) = extended_gcd(c, r);
                if g != 1 {
                    continue;
                }
                // d = r + m·c with |d| ≤ d_max
                let m_lo = -(d_max + r).div_euclid(c);
                let m_hi = (d_max - r).div_euclid(c);
                for m in m_lo..=m_hi {
                    let d = r + m * c;
                    // c·x + r·y = 1 ⇒ c·(x − m·y) + d·y = 1
                    visit_coset(c, d, y, -(x - m * y), b2, &mut visit);
                }
            }
        } else {
            for d in -d_max..=d_max {
                let (g, x, y) = extended_gcd(c, d);
                if g == 1 {
                    visit_coset(c, d, y, -x, b2, &mut visit);
                }
            }
        }
    }
}

/// All (a, b) = (a0, b0) + k(c, d) with a² + b² + c² + d² ≤ b2, given a0·d − b0·c = 1.
#[inline]
fn visit_coset<F: FnMut(i64, i64, i64, i64)>(c: i64, d: i64, a0: i64, b0: i64, b2: i64, visit: &mut F) {
    let room = b2 - c * c - d * d;
    if room < 1 {
        return;
    }
    let q = (c * c + d * d) as f64;
    let lin = (a0 * c + b0 * d) as f64;
    let k_centre = -lin / q;
    let rest = (a0 * a0 + b0 * b0) as f64 - lin * lin / q;
    let half = ((room as f64 - rest).max(0.0) / q).sqrt();
    let lo = (k_centre - half).floor() as i64 - 1;
    let hi = (k_centre + half).ceil() as i64 + 1;
    for k in lo..=hi {
        let a = a0 + k * c;
        let b = b0 + k * d;
        if a * a + b * b <= room {
            visit(a, b, c, d);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// Contribution of elements with ‖γ‖_F ∈ [B − 1, B].
    pub shell_contribution: f64,
    pub elements: u64,
    pub shell_warning: bool,
}

/// Σ_{γ ∈ PSL₂(ℤ), ‖γ‖_F ≤ B} p_t(d(z, γi)).
pub fn periodized_oracle(t: f64, z: HPoint, norm_bound: f64) -> Result<OracleResult, HeatError> {
    if !(TIME_RANGE.0..=TIME_RANGE.1).contains(&t) {
        return Err(HeatError::BadTime {
            t,
            requirement: "0.2 <= t <= 10",
        });
    }
    if !(norm_bound >= MIN_NORM_BOUND) || !norm_bound.is_finite() {
        return Err(HeatError::BadNormBound(norm_bound));
    }
    // d(z, γi) ≤ d(z, i) + d(i, γi), and 2 cosh d(i, γi) = ‖γ‖²
    let rho_max = z.distance(&HPoint::I) + (0.5 * norm_bound * norm_bound).acosh();
    let table = HeatKernelTable::new(t, rho_max);
    let (x, y) = (z.x(), z.y());
    let shell_from = ((norm_bound - 1.0) * (norm_bound - 1.0)) as i64;

    let mut total = 0.0;
    let mut comp = 0.0;
    let mut shell = 0.0;
    let mut elements = 0u64;
    for_each_element(norm_bound, |a, b, c, d| {
        let q = (c * c + d * d) as f64;
        let u = (a * c + b * d) as f64 / q;
        let v = 1.0 / q;
        let p = table.eval_log_cosh(cosh_distance_minus_one(x, y, u, v).ln_1p());
        // Neumaier summation
        let s = total + p;
        if total.abs() >= p.abs() {
            comp += (total - s) + p;
        } else {
            comp += (p - s) + total;
        }
        total = s;
        if a * a + b * b + c * c + d * d >= shell_from {
            shell += p;
        }
        elements += 1;
    });
    let value = total + comp;
    let shell_warning = shell > SHELL_TOLERANCE * value;
    if shell_warning {
        log::warn!(
            "periodized oracle t={t} z={z}: outer shell contributes {:.3e} of the sum (bound {norm_bound})",
            shell / value
        );
    }
    Ok(OracleResult {
        value,
        shell_contribution: shell,
        elements,
        shell_warning,
    })
}

/// p_t(d(z, i)): the identity's term.
pub fn identity_term(t: f64, z: HPoint) -> f64 {
    heat_kernel_h2(t, z.distance(&HPoint::I))
}

/// K₀(x) from its power series about 0,
/// −(ln(x/2) + γ) I₀(x) + Σ_{k≥1} (x²/4)^k H_k / (k!)². Independent of the
/// integral representation used for K_{ir}.
pub fn k0_power_series(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let q = x * x / 4.0;
    let (mut term, mut i0, mut sum, mut h) = (1.0, 1.0, 0.0, 0.0);
    for k in 1..80 {
        let kf = k as f64;
        term *= q / (kf * kf);
        h += 1.0 / kf;
        i0 += term;
        sum += term * h;
    }
    -((x / 2.0).ln() + EULER_GAMMA) * i0 + sum
}
