//! Maass cusp forms for SL₂(ℤ) from ingested Fourier coefficients, and the
//! `#maass-sl2z v1` data-file format.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use super::bessel::bessel_k_imag;
use super::hpoint::HPoint;
use crate::error::{DataError, SpecialFunctionError};
use crate::fundamental_domain::QuadSpec;

pub const HEADER: &str = "#maass-sl2z v1";
/// Minimum number of coefficients per form.
pub const MIN_COEFFS: usize = 10;
/// Truncation must satisfy 2πNy > r + DECAY_MARGIN at the evaluation height.
pub const DECAY_MARGIN: f64 = 20.0;
/// Relative Laplacian residual accepted by the load-time spot check.
pub const LAPLACIAN_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A Hecke-normalized cusp form (a₁ = 1) together with the constant that
/// scales it to unit L² norm on F.
#[derive(Debug, Clone, PartialEq)]
pub struct MaassFormData {
    pub r: f64,
    pub parity: Parity,
    pub coeffs: Vec<f64>,
    pub source: String,
    /// Multiplier giving unit L²(F, dμ) norm; 1.0 until normalized.
    pub c_norm: f64,
}

impl MaassFormData {
    pub fn new(r: f64, parity: Parity, coeffs: Vec<f64>, source: impl Into<String>) -> Self {
        Self {
            r,
            parity,
            coeffs,
            source: source.into(),
            c_norm: 1.0,
        }
    }

    pub fn eigenvalue(&self) -> f64 {
        -(0.25 + self.r * self.r)
    }

    /// Evaluates at z as given (no reduction).
    pub fn eval(&self, z: HPoint) -> Result<f64, SpecialFunctionError> {
        let n = self.coeffs.len();
        let y = z.y();
        if 2.0 * PI * n as f64 * y <= self.r + DECAY_MARGIN {
            return Err(SpecialFunctionError::Truncation {
                function: "eval_maass",
                detail: format!(
                    "{n} coefficients at y = {y} (need 2πNy > r + {DECAY_MARGIN}); reduce z first"
                ),
            });
        }
        let trig: fn(f64) -> f64 = match self.parity {
            Parity::Even => f64::cos,
            Parity::Odd => f64::sin,
        };
        let mut sum = 0.0;
        for (k, a) in self.coeffs.iter().enumerate() {
            let nf = (k + 1) as f64;
            let kb = bessel_k_imag(self.r, 2.0 * PI * nf * y)?;
            if kb == 0.0 {
                break;
            }
            sum += a * kb * trig(2.0 * PI * nf * z.x());
        }
        Ok(self.c_norm * y.sqrt() * sum)
    }

    /// Values at every x of one row of height y, sharing the Bessel factors.
    pub fn eval_row(&self, y: f64, xs: &[f64]) -> Result<Vec<f64>, SpecialFunctionError> {
        let first = HPoint::new(xs.first().copied().unwrap_or(0.0), y)?;
        self.eval(first)?; // truncation check
        let mut factors = Vec::with_capacity(self.coeffs.len());
        for (k, a) in self.coeffs.iter().enumerate() {
            let kb = bessel_k_imag(self.r, 2.0 * PI * (k + 1) as f64 * y)?;
            if kb == 0.0 {
                break;
            }
            factors.push(self.c_norm * y.sqrt() * a * kb);
        }
        let trig: fn(f64) -> f64 = match self.parity {
            Parity::Even => f64::cos,
            Parity::Odd => f64::sin,
        };
        Ok(xs
            .iter()
            .map(|&x| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * trig(2.0 * PI * (k + 1) as f64 * x))
                    .sum()
            })
            .collect())
    }

    /// Evaluates after reducing z into the fundamental domain.
    pub fn eval_reduced(&self, z: HPoint) -> Result<f64, SpecialFunctionError> {
        self.eval(z.reduce())
    }

    /// y²·(five-point Laplacian) + (1/4 + r²)·f at z, divided by |f(z)|.
    pub fn laplacian_residual(&self, z: HPoint, h: f64) -> Result<f64, SpecialFunctionError> {
        let at = |dx: f64, dy: f64| self.eval(HPoint::new(z.x() + dx, z.y() + dy)?);
        let f0 = at(0.0, 0.0)?;
        let lap = (at(h, 0.0)? + at(-h, 0.0)? + at(0.0, h)? + at(0.0, -h)? - 4.0 * f0) / (h * h);
        let residual = z.y() * z.y() * lap + (0.25 + self.r * self.r) * f0;
        Ok(residual.abs() / f0.abs())
    }

    /// ∫_F |f|² dμ with the current c_norm.
    pub fn l2_norm_squared(&self, spec: &QuadSpec) -> Result<f64, SpecialFunctionError> {
        let mut total = 0.0;
        for row in spec.rows() {
            let xs: Vec<f64> = row.points.iter().map(|p| p.0).collect();
            let vals = self.eval_row(row.y, &xs)?;
            total += row.points.iter().zip(vals).map(|(p, v)| p.1 * v * v).sum::<f64>();
        }
        Ok(total)
    }

    /// Sets c_norm so that the form has unit L² norm on F.
    pub fn normalize(&mut self, spec: &QuadSpec) -> Result<(), SpecialFunctionError> {
        self.c_norm = 1.0;
        let n2 = self.l2_norm_squared(spec)?;
        self.c_norm = 1.0 / n2.sqrt();
        Ok(())
    }
}

/// ⟨f, g⟩ over F.
pub fn inner_product(
    f: &MaassFormData,
    g: &MaassFormData,
    spec: &QuadSpec,
) -> Result<f64, SpecialFunctionError> {
    let mut total = 0.0;
    for row in spec.rows() {
        let xs: Vec<f64> = row.points.iter().map(|p| p.0).collect();
        let a = f.eval_row(row.y, &xs)?;
        let b = g.eval_row(row.y, &xs)?;
        total += row
            .points
            .iter()
            .zip(a.iter().zip(&b))
            .map(|(p, (u, v))| p.1 * u * v)
            .sum::<f64>();
    }
    Ok(total)
}

/// Parses the text format without normalizing or spot-checking.
pub fn parse_maass_data(text: &str, source: &str) -> Result<Vec<MaassFormData>, DataError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let first = lines.by_ref().find(|(_, l)| !l.trim().is_empty());
    let Some((line_no, header)) = first else {
        return Ok(Vec::new());
    };
    let header = header.trim_end();
    if header != HEADER {
        let message = if header.starts_with("#maass-sl2z") {
            format!("unsupported format version `{header}`")
        } else {
            format!("expected header `{HEADER}`, found `{header}`")
        };
        return Err(DataError::Parse {
            line: line_no,
            message,
        });
    }

    let mut forms = Vec::new();
    let mut current: Option<(usize, f64, Parity, usize, Vec<f64>)> = None;
    for (line_no, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with("form") {
            if let Some(done) = current.take() {
                forms.push(finish_record(done, source)?);
            }
            current = Some(parse_record_header(line_no, trimmed)?);
            continue;
        }
        let Some((_, _, _, n, coeffs)) = current.as_mut() else {
            return Err(DataError::Parse {
                line: line_no,
                message: "coefficients before any `form` record".into(),
            });
        };
        for tok in trimmed.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| DataError::Parse {
                line: line_no,
                message: format!("invalid coefficient `{tok}`"),
            })?;
            if !v.is_finite() {
                return Err(DataError::Parse {
                    line: line_no,
                    message: format!("non-finite coefficient `{tok}`"),
                });
            }
            if coeffs.len() == *n {
                return Err(DataError::Parse {
                    line: line_no,
                    message: format!("more than the declared n = {n} coefficients"),
                });
            }
            coeffs.push(v);
        }
    }
    if let Some(done) = current.take() {
        forms.push(finish_record(done, source)?);
    }
    Ok(forms)
}

fn parse_record_header(line_no: usize, line: &str) -> Result<(usize, f64, Parity, usize, Vec<f64>), DataError> {
    let err = |message: String| DataError::Parse {
        line: line_no,
        message,
    };
    let mut parts = line.split_whitespace();
    if parts.next() != Some("form") {
        return Err(err(format!("expected `form`, found `{line}`")));
    }
    let mut field = |key: &str| -> Result<String, DataError> {
        let tok = parts
            .next()
            .ok_or_else(|| err(format!("missing `{key}=` field")))?;
        tok.strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .map(str::to_owned)
            .ok_or_else(|| err(format!("expected `{key}=<value>`, found `{tok}`")))
    };
    let r_tok = field("r")?;
    let r: f64 = r_tok
        .parse()
        .map_err(|_| err(format!("invalid spectral parameter `{r_tok}`")))?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(err(format!("spectral parameter must be positive, got {r_tok}")));
    }
    let parity = match field("parity")?.as_str() {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        other => return Err(err(format!("parity must be even or odd, got `{other}`"))),
    };
    let n_tok = field("n")?;
    let n: usize = n_tok
        .parse()
        .map_err(|_| err(format!("invalid coefficient count `{n_tok}`")))?;
    if let Some(extra) = parts.next() {
        return Err(err(format!("unexpected field `{extra}`")));
    }
    Ok((line_no, r, parity, n, Vec::with_capacity(n)))
}

fn finish_record(
    (line_no, r, parity, n, coeffs): (usize, f64, Parity, usize, Vec<f64>),
    source: &str,
) -> Result<MaassFormData, DataError> {
    if coeffs.len() != n {
        return Err(DataError::Parse {
            line: line_no,
            message: format!("form r={r} declares n = {n} but has {} coefficients", coeffs.len()),
        });
    }
    if n < MIN_COEFFS {
        return Err(DataError::Validation {
            check: "coefficient count",
            message: format!("form r={r} has {n} coefficients, need at least {MIN_COEFFS}"),
        });
    }
    if (coeffs[0] - 1.0).abs() > 1e-9 {
        return Err(DataError::Validation {
            check: "normalization",
            message: format!("form r={r}: a_1 = {} but Hecke normalization needs a_1 = 1", coeffs[0]),
        });
    }
    Ok(MaassFormData::new(r, parity, coeffs, format!("{source}:{line_no}")))
}

/// Finite-difference step of the load-time Laplacian spot check.
pub const SPOT_CHECK_STEP: f64 = 1e-4;

/// Point used by the load-time Laplacian spot check.
pub fn spot_check_point() -> HPoint {
    HPoint::new(0.1, 1.3).expect("valid point")
}

/// Reads, validates, spot-checks and L²-normalizes a data file.
pub fn load_maass_data(path: impl AsRef<Path>) -> Result<Vec<MaassFormData>, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut forms = parse_maass_data(&text, &path.display().to_string())?;
    finalize_forms(&mut forms)?;
    Ok(forms)
}

/// Spot-checks the first form's Laplacian residual and normalizes all forms.
pub fn finalize_forms(forms: &mut [MaassFormData]) -> Result<(), DataError> {
    if let Some(first) = forms.first() {
        let res = first.laplacian_residual(spot_check_point(), SPOT_CHECK_STEP)?;
        if !(res <= LAPLACIAN_TOLERANCE) {
            return Err(DataError::Validation {
                check: "laplacian residual",
                message: format!("form r={}: relative residual {res:e} exceeds {LAPLACIAN_TOLERANCE:e}", first.r),
            });
        }
    }
    let spec = QuadSpec::default();
    for f in forms.iter_mut() {
        f.normalize(&spec)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "#maass-sl2z v1
form r=9.5336952613535575 parity=odd n=10
1.0 -1.0683335512235708 -0.45619735450611838 0.14133657666996599 -0.29067255498507018
0.48737093979831971 -0.7449416121475799 0.91733894435196355 -0.79188397374161895 0.31053524291042867
";

    #[test]
    fn parses_sample_record() {
        let forms = parse_maass_data(SAMPLE, "sample").unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].parity, Parity::Odd);
        assert_eq!(forms[0].coeffs.len(), 10);
        assert_eq!(forms[0].coeffs[1], -1.0683335512235708);
    }

    #[test]
    fn empty_file_gives_no_forms() {
        assert!(parse_maass_data("", "e").unwrap().is_empty());
        assert!(parse_maass_data("#maass-sl2z v1\n", "e").unwrap().is_empty());
    }

    #[test]
    fn rejects_unknown_version() {
        let err = parse_maass_data("#maass-sl2z v2\n", "v").unwrap_err();
        assert!(matches!(err, DataError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_bad_normalization() {
        let text = SAMPLE.replace("\n1.0 -1.06", "\n0.5 -1.06");
        let err = parse_maass_data(&text, "s").unwrap_err();
        assert!(matches!(err, DataError::Validation { check: "normalization", .. }), "{err}");
    }

    #[test]
    fn reports_line_of_bad_token() {
        let text = SAMPLE.replace("0.91733894435196355", "0.917x");
        match parse_maass_data(&text, "s").unwrap_err() {
            DataError::Parse { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("0.917x"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn rejects_count_mismatch() {
        let text = SAMPLE.replace("n=10", "n=11");
        assert!(parse_maass_data(&text, "s").is_err());
        let text = SAMPLE.replace("n=10", "n=9");
        assert!(parse_maass_data(&text, "s").is_err());
    }

    #[test]
    fn rejects_bad_parity_and_fields() {
        assert!(parse_maass_data(&SAMPLE.replace("parity=odd", "parity=weird"), "s").is_err());
        assert!(parse_maass_data(&SAMPLE.replace("parity=odd", "sign=odd"), "s").is_err());
        assert!(parse_maass_data(&SAMPLE.replace("n=10", "n=10 extra=1"), "s").is_err());
        assert!(parse_maass_data(&SAMPLE.replace("r=9.53", "r=-9.53"), "s").is_err());
    }

    #[test]
    fn odd_form_vanishes_on_imaginary_axis() {
        let f = &parse_maass_data(SAMPLE, "s").unwrap()[0];
        assert_eq!(f.eval(HPoint::new(0.0, 1.2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn periodic_in_x() {
        let f = &parse_maass_data(SAMPLE, "s").unwrap()[0];
        let z = HPoint::new(0.23, 1.4).unwrap();
        let a = f.eval(z).unwrap();
        let b = f.eval(z.translate(1.0)).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn truncation_criterion_enforced() {
        let f = &parse_maass_data(SAMPLE, "s").unwrap()[0];
        // 2π·10·0.3 ≈ 18.8 < r + 20
        assert!(matches!(
            f.eval(HPoint::new(0.1, 0.3).unwrap()),
            Err(SpecialFunctionError::Truncation { .. })
        ));
        assert!(f.eval_reduced(HPoint::new(0.1, 0.3).unwrap()).is_ok());
    }
}
