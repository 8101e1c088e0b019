//! Discrete spectrum of the near-field operator below `π²`.

use std::f64::consts::PI;

use serde::Serialize;

use super::field::NearFieldParams;
use crate::eigen::{count_eigenvalues_below, solve_gevp_smallest};
use crate::error::Result;
use crate::fem::{apply_dirichlet, assemble_stiffness_mass};
use crate::geometry::EdgeTag;

/// Eigenvalues within `margin·π²` of the threshold are not trusted.
pub const DISCRETE_MARGIN: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearFieldSpectrum {
    pub alpha: f64,
    /// Accepted discrete eigenvalues, below `π²(1 − margin)`.
    pub mu: Vec<f64>,
    pub n_circ: usize,
    /// Every computed eigenvalue below `π²`, accepted or not.
    pub below_threshold: Vec<f64>,
    pub margin: f64,
    pub truncation_l: f64,
}

/// Eigenvalues of the mixed problem on `Ω_L` with Dirichlet at `X = L`.
pub fn near_field_discrete_spectrum(
    alpha: f64,
    params: &NearFieldParams,
    count: usize,
) -> Result<NearFieldSpectrum> {
    near_field_discrete_spectrum_with(alpha, params, count, DISCRETE_MARGIN)
}

pub fn near_field_discrete_spectrum_with(
    alpha: f64,
    params: &NearFieldParams,
    count: usize,
    margin: f64,
) -> Result<NearFieldSpectrum> {
    let (geom, mesh) = params.mesh(alpha)?;
    let (k, m) = assemble_stiffness_mass(&mesh);
    let walls = [EdgeTag::DirichletWall, EdgeTag::ArtificialBoundary];
    let (k, _) = apply_dirichlet(&k, &mesh, &walls)?;
    let (m, _) = apply_dirichlet(&m, &mesh, &walls)?;
    let threshold = PI * PI;
    let below = count_eigenvalues_below(&k, &m, threshold)?;
    let want = below.min(count.max(1));
    let below_threshold = if want == 0 {
        Vec::new()
    } else {
        let r = solve_gevp_smallest(&k, &m, want, 0.0)?;
        r.eigenvalues
            .into_iter()
            .filter(|&x| x < threshold)
            .take(want)
            .collect()
    };
    let mu: Vec<f64> = below_threshold
        .iter()
        .copied()
        .filter(|&x| x < threshold * (1.0 - margin))
        .collect();
    Ok(NearFieldSpectrum {
        alpha,
        n_circ: mu.len(),
        mu,
        below_threshold,
        margin,
        truncation_l: geom.truncation_l,
    })
}

/// Eigenvalues below `π²` at truncation `L` that move by less than `rtol`
/// (relative) when `L` is doubled; these are accepted without a margin.
pub fn near_field_spectrum_l_stable(
    alpha: f64,
    params: &NearFieldParams,
    count: usize,
    rtol: f64,
) -> Result<NearFieldSpectrum> {
    let short = near_field_discrete_spectrum_with(alpha, params, count, 0.0)?;
    let long_params = NearFieldParams {
        truncation_l: 2.0 * short.truncation_l,
        ..*params
    };
    let long = near_field_discrete_spectrum_with(alpha, &long_params, count, 0.0)?;
    let mu: Vec<f64> = short
        .below_threshold
        .iter()
        .zip(&long.below_threshold)
        .take_while(|(a, b)| (*a - *b).abs() < rtol * *b)
        .map(|(a, _)| *a)
        .collect();
    Ok(NearFieldSpectrum {
        n_circ: mu.len(),
        mu,
        margin: 0.0,
        ..short
    })
}
