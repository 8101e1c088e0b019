use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary condition imposed on the slanted side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum GammaBc {
    #[default]
    Neumann,
    Dirichlet,
}

/// The trapezoid `{0 < y < ε, y tan α < x < 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidGeom {
    pub eps: f64,
    pub alpha: f64,
    pub gamma_bc: GammaBc,
}

impl TrapezoidGeom {
    pub fn new(eps: f64, alpha: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "thickness must be positive, got {eps}"
            )));
        }
        if !(alpha.abs() < FRAC_PI_2) {
            return Err(Error::InvalidGeometry(format!(
                "|alpha| must be below pi/2, got {alpha}"
            )));
        }
        if eps * alpha.tan() >= 1.0 {
            return Err(Error::InvalidGeometry(format!(
                "eps tan(alpha) = {} leaves no room for the strip",
                eps * alpha.tan()
            )));
        }
        Ok(Self {
            eps,
            alpha,
            gamma_bc: GammaBc::Neumann,
        })
    }

    pub fn with_gamma_bc(mut self, bc: GammaBc) -> Self {
        self.gamma_bc = bc;
        self
    }

    pub fn area(&self) -> f64 {
        self.eps - self.eps * self.eps * self.alpha.tan() / 2.0
    }

    /// Length of the slanted side.
    pub fn gamma_length(&self) -> f64 {
        self.eps / self.alpha.cos()
    }
}

/// The near-field half-strip `{0 < Y < 1, X > Y tan α}` truncated at `X = L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfStripGeom {
    pub alpha: f64,
    pub truncation_l: f64,
}

/// Default truncation abscissa.
pub const DEFAULT_TRUNCATION: f64 = 8.0;

impl HalfStripGeom {
    pub fn new(alpha: f64, truncation_l: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&alpha) {
            return Err(Error::InvalidGeometry(format!(
                "alpha must lie in [0, pi/2), got {alpha}"
            )));
        }
        if !(truncation_l > alpha.tan()) || !truncation_l.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "truncation L = {truncation_l} must exceed tan(alpha) = {}",
                alpha.tan()
            )));
        }
        Ok(Self {
            alpha,
            truncation_l,
        })
    }

    pub fn area(&self) -> f64 {
        self.truncation_l - self.alpha.tan() / 2.0
    }

    pub fn gamma_length(&self) -> f64 {
        1.0 / self.alpha.cos()
    }
}

/// Singular exponents `(λ₁, λ₂)` at the tip `(0,0)` and at the other end of
/// the slanted side. A value below one means the gradient is unbounded there.
pub fn corner_exponents(alpha: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    (PI / (PI - 2.0 * alpha), PI / (PI + 2.0 * alpha))
}
