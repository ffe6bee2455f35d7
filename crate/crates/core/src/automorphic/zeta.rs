//! Riemann zeta on Re s = 1, complex log-gamma, and the completed zeta
//! ξ(s) = π^{−s/2} Γ(s/2) ζ(s), as needed by the Eisenstein constant term.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::SpecialFunctionError;

/// B_2, B_4, …, B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

pub const EULER_MACLAURIN_TERMS: usize = 100;

/// ζ(s) by Euler–Maclaurin with `n` direct terms and eight Bernoulli
/// corrections. Valid for s ≠ 1 with Re s > −15 and |Im s| ≲ 2πn.
pub fn zeta_euler_maclaurin(s: Complex64, n: usize) -> Result<Complex64, SpecialFunctionError> {
    if (s - 1.0).norm() == 0.0 {
        return Err(SpecialFunctionError::Pole {
            function: "zeta",
            at: "s = 1".into(),
        });
    }
    let n = n.max(2);
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp(); // N^{-s}
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut factorial = 2.0; // (2k)!
    let mut npow = n_pow / nf; // N^{−s−2k+1} at k = 1
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k1 = k as f64 + 1.0;
        sum += rising * npow * (*b / factorial);
        rising *= (s + 2.0 * k1 - 1.0) * (s + 2.0 * k1);
        factorial *= (2.0 * k1 + 1.0) * (2.0 * k1 + 2.0);
        npow /= nf * nf;
    }
    Ok(sum)
}

/// ζ(1 + it).
pub fn zeta_line(t: f64) -> Result<Complex64, SpecialFunctionError> {
    if t == 0.0 {
        return Err(SpecialFunctionError::Pole {
            function: "zeta_line",
            at: "t = 0 (s = 1)".into(),
        });
    }
    if !(t.abs() <= 100.0) {
        return Err(SpecialFunctionError::Domain {
            function: "zeta_line",
            detail: format!("|t| = {} exceeds 100", t.abs()),
        });
    }
    zeta_euler_maclaurin(Complex64::new(1.0, t), EULER_MACLAURIN_TERMS)
}

/// Principal-branch-free log Γ(z) for Re z > 0: the real part is exact,
/// the imaginary part is correct modulo 2π.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    // shift up to Re z ≥ 15, then Stirling with six Bernoulli terms
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let w_inv = w.inv();
    let w_inv2 = w_inv * w_inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = w_inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(7).enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += pow * (*b / (two_k * (two_k - 1.0)));
        pow *= w_inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// ln ξ(1 + 2ir) = −(1/2 + ir) ln π + ln Γ(1/2 + ir) + ln ζ(1 + 2ir);
/// imaginary part modulo 2π.
pub fn ln_completed_zeta_line(r: f64) -> Result<Complex64, SpecialFunctionError> {
    let half_s = Complex64::new(0.5, r);
    let zeta = zeta_line(2.0 * r)?;
    Ok(-half_s * PI.ln() + ln_gamma(half_s) + zeta.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    // 30-digit multiprecision references
    const ZETA_LINE: &[(f64, f64, f64)] = &[
        (2.0, 0.5981655697623817367, -0.3518547452178452905),
        (10.0, 1.3902873132374014268, -0.10978515306630205691),
        (0.5, 0.57843302109931116894, -1.9635494964529787846),
        (50.0, 0.44103873082309397751, 0.28158245502968301091),
        (100.0, 1.6328335066867118666, -0.068131203841812490101),
        (-3.0, 0.62885173395182553419, 0.10747576015058644043),
    ];

    #[test]
    fn zeta_on_line_matches_reference() {
        for &(t, re, im) in ZETA_LINE {
            let z = zeta_line(t).unwrap();
            let want = Complex64::new(re, im);
            assert!((z - want).norm() <= 1e-10 * want.norm(), "t={t}: {z}");
        }
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = zeta_euler_maclaurin(Complex64::new(2.0, 0.0), EULER_MACLAURIN_TERMS).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() < 1e-14);
        assert!(z.im.abs() < 1e-16);
    }

    #[test]
    fn doubled_truncation_agrees() {
        for t in [2.0, 17.0, 60.0] {
            let s = Complex64::new(1.0, t);
            let a = zeta_euler_maclaurin(s, 100).unwrap();
            let b = zeta_euler_maclaurin(s, 200).unwrap();
            assert!((a - b).norm() <= 1e-12 * b.norm(), "t={t}");
        }
    }

    #[test]
    fn schwarz_reflection() {
        for t in [0.3, 4.0, 33.0] {
            let a = zeta_line(t).unwrap();
            let b = zeta_line(-t).unwrap();
            assert!((a.conj() - b).norm() < 1e-14);
        }
    }

    #[test]
    fn pole_is_rejected() {
        assert!(matches!(
            zeta_line(0.0),
            Err(SpecialFunctionError::Pole { .. })
        ));
    }

    #[test]
    fn ln_gamma_matches_reference() {
        let cases = [
            (Complex64::new(0.5, 3.0), Complex64::new(-3.7934504504362231734, 0.30981927108643916606)),
            (Complex64::new(0.5, 0.1), Complex64::new(0.54808643117197697231, -0.19360871833945302018)),
            (Complex64::new(0.5, 20.0), Complex64::new(-30.496988002693259643, 39.91672910847332607)),
            (Complex64::new(2.5, -1.0), Complex64::new(0.04810862962355502122, -0.7401435969990889447)),
        ];
        for (z, want) in cases {
            let got = ln_gamma(z);
            assert!((got.re - want.re).abs() < 1e-13, "{z}");
            let dphase = (got.im - want.im) / (2.0 * PI);
            assert!((dphase - dphase.round()).abs() < 1e-13, "{z}");
        }
    }

    #[test]
    fn gamma_modulus_on_critical_line() {
        // |Γ(1/2 + ir)|² = π / cosh(πr)
        for r in [0.0, 1.0, 7.5, 25.0] {
            let lg = ln_gamma(Complex64::new(0.5, r));
            let want = 0.5 * (PI / (PI * r).cosh()).ln();
            assert!((lg.re - want).abs() < 1e-12, "r={r}");
        }
    }
}
