//! The broken strip: two copies of the trapezoid glued along `Γ`.
//!
//! Its spectrum splits by reflection symmetry. Even modes solve the
//! trapezoid problem with Neumann data on `Γ`, odd modes the one with
//! Dirichlet data.

use std::f64::consts::PI;

use serde::Serialize;

use super::spectrum::{trapezoid_spectrum, TrapezoidParams};
use crate::error::Result;
use crate::geometry::GammaBc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    /// Neumann on `Γ`.
    Symmetric,
    /// Dirichlet on `Γ`.
    Antisymmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledEigenvalue {
    pub value: f64,
    /// `λ` measured from the discrete threshold.
    pub normalized: f64,
    pub parity: Parity,
}

/// The `count` smallest eigenvalues of the broken strip, merged from both
/// parity families.
pub fn broken_strip_spectrum(
    eps: f64,
    alpha: f64,
    count: usize,
    params: &TrapezoidParams,
) -> Result<Vec<LabeledEigenvalue>> {
    let (even, odd) = rayon::join(
        || trapezoid_spectrum(eps, alpha, GammaBc::Neumann, count, params),
        || trapezoid_spectrum(eps, alpha, GammaBc::Dirichlet, count, params),
    );
    let (even, odd) = (even?, odd?);
    let mut all: Vec<LabeledEigenvalue> = even
        .eigenvalues
        .iter()
        .map(|&v| (v, Parity::Symmetric, even.discrete_threshold))
        .chain(
            odd.eigenvalues
                .iter()
                .map(|&v| (v, Parity::Antisymmetric, odd.discrete_threshold)),
        )
        .map(|(value, parity, t)| LabeledEigenvalue {
            value,
            normalized: value - t,
            parity,
        })
        .collect();
    all.sort_by(|a, b| a.value.total_cmp(&b.value));
    all.truncate(count);
    Ok(all)
}

/// Closed form at `α = 0`: `π²/ε² + (p + 1/2)²π²` for even modes and
/// `π²/ε² + p²π²` (`p ≥ 1`) for odd ones, merged and sorted.
pub fn exact_alpha0_broken(eps: f64, count: usize) -> Vec<LabeledEigenvalue> {
    let base = PI * PI / (eps * eps);
    let mut all: Vec<LabeledEigenvalue> = (0..count)
        .flat_map(|p| {
            let even = (p as f64 + 0.5).powi(2) * PI * PI;
            let odd = ((p + 1) as f64).powi(2) * PI * PI;
            [
                LabeledEigenvalue {
                    value: base + even,
                    normalized: even,
                    parity: Parity::Symmetric,
                },
                LabeledEigenvalue {
                    value: base + odd,
                    normalized: odd,
                    parity: Parity::Antisymmetric,
                },
            ]
        })
        .collect();
    all.sort_by(|a, b| a.value.total_cmp(&b.value));
    all.truncate(count);
    all
}
