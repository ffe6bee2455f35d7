use std::fmt;

use num_complex::Complex64;

use crate::error::SpecialFunctionError;

/// A point z = x + iy of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    x: f64,
    y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, SpecialFunctionError> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(SpecialFunctionError::Domain {
                function: "HPoint::new",
                detail: format!("need finite x and y > 0, got ({x}, {y})"),
            });
        }
        Ok(Self { x, y })
    }

    /// The basepoint i.
    pub const I: HPoint = HPoint { x: 0.0, y: 1.0 };

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    /// z ↦ z + k
    pub fn translate(self, k: f64) -> Self {
        Self {
            x: self.x + k,
            y: self.y,
        }
    }

    /// z ↦ −1/z
    pub fn invert(self) -> Self {
        Self::from_complex(-self.to_complex().inv())
    }

    /// Image under the integer matrix (a b; c d) with ad − bc = 1.
    pub fn mobius(self, a: i64, b: i64, c: i64, d: i64) -> Self {
        let z = self.to_complex();
        let w = (z * a as f64 + b as f64) / (z * c as f64 + d as f64);
        Self::from_complex(w)
    }

    /// Classical reduction into F = {|x| ≤ 1/2, |z| ≥ 1}.
    pub fn reduce(self) -> Self {
        let mut z = self;
        for _ in 0..1000 {
            z.x -= (z.x + 0.5).floor();
            let n2 = z.x * z.x + z.y * z.y;
            if n2 < 1.0 - 1e-15 {
                z = z.invert();
            } else {
                break;
            }
        }
        z
    }

    pub fn in_fundamental_domain(&self) -> bool {
        self.x.abs() <= 0.5 + 1e-12 && self.x * self.x + self.y * self.y >= 1.0 - 1e-12
    }

    /// cosh of the hyperbolic distance, 1 + |z − w|² / (2 Im z Im w).
    pub fn cosh_distance(&self, other: &HPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        1.0 + (dx * dx + dy * dy) / (2.0 * self.y * other.y)
    }

    pub fn distance(&self, other: &HPoint) -> f64 {
        self.cosh_distance(other).acosh()
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}
