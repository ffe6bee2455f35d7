//! Modified Bessel function of the second kind with purely imaginary order,
//! K_{ir}(x) = ∫₀^∞ e^{−x cosh u} cos(ru) du.
//!
//! The real-line integral cancels down to size e^{−πr/2} when r > x, which
//! destroys relative accuracy exactly where automorphic expansions multiply
//! it back up by e^{πr/2}. We integrate instead along the steepest-descent
//! contour w = u + iβ(u) of x cosh w − irw, where
//!
//! ```text
//!     sin β(u) = min(1, r u / (x sinh u)).
//! ```
//!
//! For r ≤ x the contour is a single non-oscillating tail through the saddle
//! at u = 0. For r > x it runs along Im w = π/2 up to the root u₁ of
//! x sinh u = r u and then descends. Taking real parts, with the common
//! factor e^{−πr/2} pulled out,
//!
//! ```text
//!     e^{πr/2} K_{ir}(x) = ∫₀^{u₁} cos(ru − x sinh u) du
//!                        + ∫_{u₁}^∞ exp(−x cosh u cos β + r(π/2 − β)) du.
//! ```
//!
//! The tail is integrated in v with u = u₁ + v², which removes the square-root
//! behaviour of cos β at u₁.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::SpecialFunctionError;
use crate::quadrature::{uniform_edges, GaussLegendre};

const TAIL_PANELS: usize = 8;
const TAIL_NODES: usize = 20;
const FLAT_NODES: usize = 16;
/// Tail is cut where the integrand has dropped by e^{-46} from its peak.
const TAIL_DROP: f64 = 46.0;

fn tail_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(TAIL_NODES))
}

fn flat_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(FLAT_NODES))
}

/// K_{ir}(x) for real r and x > 0. Even in r.
pub fn bessel_k_imag(r: f64, x: f64) -> Result<f64, SpecialFunctionError> {
    let scaled = bessel_k_imag_scaled(r, x)?;
    Ok(scaled * (-FRAC_PI_2 * r.abs()).exp())
}

/// e^{π|r|/2} K_{ir}(x), which stays O(1)-sized for x ≲ |r|.
pub fn bessel_k_imag_scaled(r: f64, x: f64) -> Result<f64, SpecialFunctionError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFunctionError::Domain {
            function: "bessel_k_imag",
            detail: format!("argument x = {x} must be positive and finite"),
        });
    }
    if !r.is_finite() {
        return Err(SpecialFunctionError::Domain {
            function: "bessel_k_imag",
            detail: format!("order r = {r} must be finite"),
        });
    }
    let r = r.abs();
    let u1 = if r > x { turning_point(r, x) } else { 0.0 };
    let flat = if u1 > 0.0 { flat_segment(r, x, u1) } else { 0.0 };
    Ok(flat + descent_tail(r, x, u1))
}

/// Positive root of x sinh u = r u, for r > x.
fn turning_point(r: f64, x: f64) -> f64 {
    let f = |u: f64| x * u.sinh() - r * u;
    let mut lo = 0.0;
    let mut hi = 1.0_f64.max((2.0 * r / x).ln() + 1.0);
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    // f is convex with f(0) = 0 and f'(0) < 0, so f < 0 on (0, root).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = x * u.cosh() - r;
        if d > 0.0 {
            u -= f(u) / d;
        }
    }
    u
}

/// ∫₀^{u₁} cos(ru − x sinh u) du.
fn flat_segment(r: f64, x: f64, u1: f64) -> f64 {
    // phase ru − x sinh u rises from 0 to its maximum at cosh u = r/x and
    // falls back to 0 at u₁
    let u0 = (r / x).acosh();
    let peak = r * u0 - x * u0.sinh();
    let panels = (2.0 * peak / std::f64::consts::PI).ceil() as usize + 2;
    let rule = flat_rule();
    // split at the stationary point so each panel sees a monotone phase
    let left = ((panels as f64) * u0 / u1).ceil().max(1.0) as usize;
    let right = panels.saturating_sub(left).max(1);
    let g = |u: f64| (r * u - x * u.sinh()).cos();
    rule.integrate_panels(&uniform_edges(0.0, u0, left), g)
        + rule.integrate_panels(&uniform_edges(u0, u1, right), g)
}

/// Scaled exponent −x cosh u cos β + r(π/2 − β) on the descending tail.
fn tail_exponent(r: f64, x: f64, u: f64) -> f64 {
    let (sh, ch) = (u.sinh(), u.cosh());
    // g = sin β and 1 − g computed as (x sinh u − r u)/(x sinh u)
    let (g, one_minus_g) = if u < 1e-6 {
        let ratio = 1.0 - u * u / 6.0;
        let g = r / x * ratio;
        (g, 1.0 - g)
    } else {
        let xs = x * sh;
        (r * u / xs, (xs - r * u) / xs)
    };
    let one_minus_g = one_minus_g.max(0.0);
    let g = g.min(1.0);
    let cos_beta = (one_minus_g * (1.0 + g)).sqrt();
    let angle = cos_beta.atan2(g); // π/2 − β
    -x * ch * cos_beta + r * angle
}

/// ∫_{u₁}^∞ exp(tail_exponent) du, integrated in v = √(u − u₁).
fn descent_tail(r: f64, x: f64, u1: f64) -> f64 {
    let start = tail_exponent(r, x, u1);
    let mut span = 0.5;
    while tail_exponent(r, x, u1 + span) > start - TAIL_DROP {
        span *= 2.0;
        if span > 64.0 {
            break;
        }
    }
    let v_end = span.sqrt();
    let rule = tail_rule();
    rule.integrate_panels(&uniform_edges(0.0, v_end, TAIL_PANELS), |v| {
        2.0 * v * tail_exponent(r, x, u1 + v * v).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values from a 30-digit multiprecision evaluation.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.0, 1.0, 0.421024438240708333),
        (1.0, 2.0, 0.0923854598903911815),
        (5.0, 2.0, -0.000346337880806571435),
        (5.0, 40.0, 6.16141177704083126e-19),
        (9.5, 5.44, -2.1584314472448014e-7),
        (12.0, 6.0, -5.10541815150114868e-10),
        (12.0, 12.1, 3.82932530374596077e-9),
        (24.0, 6.25, 1.84105837229103998e-17),
        (30.0, 0.001, -1.06455089138387844e-21),
        (30.0, 1.0, -9.18612761825167667e-22),
        (0.5, 0.001, -0.66591126051277377),
        (13.75, 13.75, 2.44383190237215882e-10),
        (3.0, 3.01, 0.00866904348769407602),
        (20.0, 100.0, 6.32317607178400877e-46),
        (0.25, 0.05, 2.68760881616255403),
        (7.0, 7.5, 9.34527456305525526e-6),
    ];

    #[test]
    fn matches_reference_to_relative_scale() {
        for &(r, x, want) in REFERENCE {
            let got = bessel_k_imag(r, x).unwrap();
            // relative to the natural size of K at this (r, x)
            let scale = want.abs().max((-FRAC_PI_2 * r).exp() * 1e-3);
            assert!(
                (got - want).abs() <= 1e-11 * scale,
                "K_i{r}({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn k0_power_series_oracle() {
        use crate::oracle::k0_power_series;
        for x in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let got = bessel_k_imag(0.0, x).unwrap();
            assert!((got - k0_power_series(x)).abs() < 1e-12, "x={x}");
        }
        assert!((k0_power_series(1.0) - 0.4210244382).abs() < 1e-10);
    }

    #[test]
    fn even_in_order() {
        for &(r, x) in &[(3.0, 2.0), (0.7, 5.0), (11.0, 4.0)] {
            assert_eq!(bessel_k_imag(r, x).unwrap(), bessel_k_imag(-r, x).unwrap());
        }
    }

    #[test]
    fn large_argument_is_tiny() {
        let v = bessel_k_imag(5.0, 40.0).unwrap();
        assert!(v.abs() < 1e-17);
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(bessel_k_imag(1.0, 0.0).is_err());
        assert!(bessel_k_imag(1.0, -2.0).is_err());
    }

    #[test]
    fn decreasing_in_argument_past_turning_point() {
        for r in [0.0, 2.0, 5.0] {
            let mut prev = f64::INFINITY;
            for k in 0..50 {
                let x = 1.0 + k as f64 + r;
                let v = bessel_k_imag(r, x).unwrap();
                assert!(v < prev, "r={r} x={x}");
                prev = v;
            }
        }
    }
}
