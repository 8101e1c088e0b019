//! The threshold field `W₊` on the truncated half-strip and its
//! scattering coefficient.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::solve_complex_symmetric_report;
use crate::error::{Error, Result};
use crate::fem::{
    apply_dirichlet, assemble_boundary_load, assemble_robin_boundary, assemble_stiffness_mass,
};
use crate::geometry::{
    build_halfstrip_mesh, EdgeTag, GradingSpec, HalfStripGeom, Mesh, DEFAULT_TRUNCATION,
};

/// Discretization of the near-field half-strip problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearFieldParams {
    pub truncation_l: f64,
    /// Target element size in thickness units.
    pub h: f64,
    pub grading: GradingSpec,
}

impl Default for NearFieldParams {
    fn default() -> Self {
        Self {
            truncation_l: DEFAULT_TRUNCATION,
            h: 0.04,
            grading: GradingSpec::default(),
        }
    }
}

impl NearFieldParams {
    /// Smallest distance kept between the tip and the artificial boundary.
    pub const DECAY_MARGIN: f64 = 4.0;

    /// Truncation used at angle `alpha`: the configured `L`, pushed right
    /// when the tip itself reaches beyond `L − 4`.
    pub fn truncation_at(&self, alpha: f64) -> f64 {
        self.truncation_l.max(alpha.tan() + Self::DECAY_MARGIN)
    }

    pub fn geometry(&self, alpha: f64) -> Result<HalfStripGeom> {
        HalfStripGeom::new(alpha, self.truncation_at(alpha))
    }

    pub fn mesh(&self, alpha: f64) -> Result<(HalfStripGeom, Mesh)> {
        let geom = self.geometry(alpha)?;
        let mesh = build_halfstrip_mesh(&geom, self.h, &self.grading)?;
        Ok((geom, mesh))
    }
}

/// Solution of the Robin-truncated threshold problem.
#[derive(Debug, Clone)]
pub struct ThresholdField {
    pub geom: HalfStripGeom,
    pub mesh: Mesh,
    /// Nodal values of `Ŵ₊` (full numbering, zero on the walls).
    pub values: Vec<Complex64>,
    pub s: Complex64,
    pub relative_residual: f64,
    pub condition_estimate: f64,
}

impl ThresholdField {
    /// `||S| − 1|`.
    pub fn unitarity_error(&self) -> f64 {
        (self.s.norm() - 1.0).abs()
    }
}

/// Solves `∫∇Ŵ·∇v − π²Ŵv − (1/(L−i))∫_{Γ_L} Ŵv = −(2i/(L²+1))∫_{Γ_L} w_in v`.
pub fn solve_threshold_field_on(geom: &HalfStripGeom, mesh: Mesh) -> Result<ThresholdField> {
    let l = geom.truncation_l;
    let (k, m) = assemble_stiffness_mass(&mesh);
    let (robin, load) = assemble_robin_boundary(&mesh, l)?;
    let a = k
        .linear_combination(1.0, &m, -PI * PI)
        .to_complex()
        .linear_combination(Complex64::new(1.0, 0.0), &robin, Complex64::new(1.0, 0.0));
    let (ac, map) = apply_dirichlet(&a, &mesh, &[EdgeTag::DirichletWall])?;
    let rhs = map.restrict(&load.coeffs);
    let sol = solve_complex_symmetric_report(&ac, &rhs)?;
    let values = map.extend(&sol.solution);
    let s = scattering_coefficient(&values, geom, &mesh)?;
    Ok(ThresholdField {
        geom: *geom,
        mesh,
        values,
        s,
        relative_residual: sol.relative_residual,
        condition_estimate: sol.condition_estimate,
    })
}

pub fn solve_threshold_field(alpha: f64, params: &NearFieldParams) -> Result<ThresholdField> {
    let (geom, mesh) = params.mesh(alpha)?;
    if geom.truncation_l < NearFieldParams::DECAY_MARGIN {
        return Err(Error::InvalidArgument(format!(
            "truncation L = {} leaves too little room for decay (need >= 4)",
            geom.truncation_l
        )));
    }
    solve_threshold_field_on(&geom, mesh)
}

/// `S = 2/(L²+1) ∫_{Γ_L} (W₊ − w_in) w_in dY` with `w_in = (L+i) sin(πY)`.
pub fn scattering_coefficient(
    values: &[Complex64],
    geom: &HalfStripGeom,
    mesh: &Mesh,
) -> Result<Complex64> {
    if values.len() != mesh.n_nodes() {
        return Err(Error::DimensionMismatch(format!(
            "field has {} values, mesh has {} nodes",
            values.len(),
            mesh.n_nodes()
        )));
    }
    let l = geom.truncation_l;
    let g = assemble_boundary_load(mesh, EdgeTag::ArtificialBoundary, |_, y| (PI * y).sin())?;
    let w_trace: Complex64 = g.iter().zip(values).map(|(&gi, &wi)| wi * gi).sum();
    let lp = Complex64::new(l, 1.0);
    Ok((lp * w_trace - lp * lp * 0.5) * (2.0 / (l * l + 1.0)))
}
