//! Eigenvalues of the thin trapezoid.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::eigen::{count_eigenvalues_below, solve_gevp_with, GevpOptions};
use crate::error::{Error, Result};
use crate::fem::{apply_dirichlet, assemble_stiffness_mass};
use crate::geometry::{
    build_trapezoid_mesh, EdgeTag, ElementOrder, GammaBc, GradingSpec, Mesh, TrapezoidGeom,
};
use crate::linalg::dense::dense_generalized_eigenvalues;

/// `π²/ε² + (p + 1/2)²π²` for `p = 0..count`.
pub fn exact_alpha0_spectrum(eps: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|p| PI * PI / (eps * eps) + (p as f64 + 0.5).powi(2) * PI * PI)
        .collect()
}

/// Discretization of the trapezoid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidParams {
    /// Element size as a fraction of the thickness.
    pub h_over_eps: f64,
    pub order: ElementOrder,
    pub grading: GradingSpec,
    /// Extra uniform refinements after meshing.
    pub refinements: usize,
    pub gevp: GevpOptions,
}

impl Default for TrapezoidParams {
    fn default() -> Self {
        Self {
            h_over_eps: 1.0 / 12.0,
            order: ElementOrder::P2,
            grading: GradingSpec::default(),
            refinements: 0,
            gevp: GevpOptions::default(),
        }
    }
}

impl TrapezoidParams {
    /// Element layers across the thickness of the finished mesh.
    pub fn layers(&self) -> usize {
        let ny = (1.0 / self.h_over_eps - 1e-9).ceil().max(1.0) as usize;
        ny << self.refinements
    }

    /// Normalized near-field mesh size with the same resolution.
    pub fn near_field_h(&self) -> f64 {
        1.0 / self.layers() as f64
    }

    pub fn mesh(&self, geom: &TrapezoidGeom) -> Result<Mesh> {
        let mut mesh = build_trapezoid_mesh(geom, self.h_over_eps * geom.eps, &self.grading)?;
        for _ in 0..self.refinements {
            mesh = mesh.refine();
        }
        Ok(mesh.with_order(self.order))
    }
}

/// First eigenvalue of `−u″` on `(0, 1)` with Dirichlet ends, discretized by
/// `n` uniform elements of the given order: the bottom of the discrete
/// transverse spectrum, `π²` up to discretization error.
pub fn transverse_threshold(n: usize, order: ElementOrder) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    let h = 1.0 / n as f64;
    let (dofs, ke, me): (usize, Vec<Vec<f64>>, Vec<Vec<f64>>) = match order {
        ElementOrder::P1 => (
            n + 1,
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        ),
        ElementOrder::P2 => (
            2 * n + 1,
            vec![
                vec![7.0, -8.0, 1.0],
                vec![-8.0, 16.0, -8.0],
                vec![1.0, -8.0, 7.0],
            ],
            vec![
                vec![4.0, 2.0, -1.0],
                vec![2.0, 16.0, 2.0],
                vec![-1.0, 2.0, 4.0],
            ],
        ),
    };
    let (ks, ms) = match order {
        ElementOrder::P1 => (1.0 / h, h / 6.0),
        ElementOrder::P2 => (1.0 / (3.0 * h), h / 30.0),
    };
    let local = ke.len();
    let mut k = DMatrix::zeros(dofs, dofs);
    let mut m = DMatrix::zeros(dofs, dofs);
    for e in 0..n {
        let o = e * (local - 1);
        for i in 0..local {
            for j in 0..local {
                k[(o + i, o + j)] += ks * ke[i][j];
                m[(o + i, o + j)] += ms * me[i][j];
            }
        }
    }
    let inner = dofs - 2;
    let k = k.view((1, 1), (inner, inner)).into_owned();
    let m = m.view((1, 1), (inner, inner)).into_owned();
    Ok(dense_generalized_eigenvalues(&k, &m)?[0])
}

/// Computed eigenvalues of one trapezoid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapezoidSpectrum {
    pub eps: f64,
    pub alpha: f64,
    pub gamma_bc: GammaBc,
    pub eigenvalues: Vec<f64>,
    pub residual_norms: Vec<f64>,
    /// `π²/ε²`.
    pub threshold: f64,
    /// Bottom of the discrete transverse spectrum divided by `ε²`.
    pub discrete_threshold: f64,
    /// Eigenvalues strictly below `π²/ε²`.
    pub below_threshold: usize,
    /// Eigenvalues strictly below the discrete threshold.
    pub below_discrete_threshold: usize,
    pub n_dofs: usize,
    pub mesh_h: f64,
}

impl TrapezoidSpectrum {
    /// `λ − π²/ε²` measured from the discrete threshold.
    pub fn normalized(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|l| l - self.discrete_threshold)
            .collect()
    }
}

/// Eigenpairs with the mesh they live on.
#[derive(Debug, Clone)]
pub struct TrapezoidSolution {
    pub spectrum: TrapezoidSpectrum,
    pub mesh: Mesh,
    /// Eigenvectors on the full node numbering.
    pub modes: Vec<Vec<f64>>,
}

pub fn trapezoid_spectrum(
    eps: f64,
    alpha: f64,
    gamma_bc: GammaBc,
    count: usize,
    params: &TrapezoidParams,
) -> Result<TrapezoidSpectrum> {
    Ok(solve_trapezoid(eps, alpha, gamma_bc, count, params)?.spectrum)
}

/// The `count` smallest eigenpairs, found in two windows: the eigenvalues
/// below the discrete threshold from the bottom, then the rest from the
/// threshold up.
pub fn solve_trapezoid(
    eps: f64,
    alpha: f64,
    gamma_bc: GammaBc,
    count: usize,
    params: &TrapezoidParams,
) -> Result<TrapezoidSolution> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let geom = TrapezoidGeom::new(eps, alpha)?.with_gamma_bc(gamma_bc);
    let mesh = params.mesh(&geom)?;
    let (k, m) = assemble_stiffness_mass(&mesh);
    let tags: &[EdgeTag] = match gamma_bc {
        GammaBc::Neumann => &[EdgeTag::DirichletWall],
        GammaBc::Dirichlet => &[EdgeTag::DirichletWall, EdgeTag::FreeSide],
    };
    let (k, map) = apply_dirichlet(&k, &mesh, tags)?;
    let (m, _) = apply_dirichlet(&m, &mesh, tags)?;
    let threshold = PI * PI / (eps * eps);
    let discrete_threshold = transverse_threshold(params.layers(), params.order)? / (eps * eps);
    let below_discrete = count_eigenvalues_below(&k, &m, discrete_threshold)?;
    let below = count_eigenvalues_below(&k, &m, threshold)?;
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    let mut modes = Vec::new();
    let low = below_discrete.min(count);
    if low > 0 {
        let r = solve_gevp_with(&k, &m, low, 0.0, &params.gevp)?;
        for (i, v) in r
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < discrete_threshold)
        {
            values.push(*v);
            residuals.push(r.residual_norms[i]);
            modes.push(r.eigenvectors[i].clone());
        }
    }
    if values.len() < count {
        let r = solve_gevp_with(
            &k,
            &m,
            count - values.len(),
            discrete_threshold,
            &params.gevp,
        )?;
        values.extend(&r.eigenvalues);
        residuals.extend(&r.residual_norms);
        modes.extend(r.eigenvectors);
    }
    let modes = modes.iter().map(|u| map.extend(u)).collect();
    Ok(TrapezoidSolution {
        spectrum: TrapezoidSpectrum {
            eps,
            alpha,
            gamma_bc,
            eigenvalues: values,
            residual_norms: residuals,
            threshold,
            discrete_threshold,
            below_threshold: below,
            below_discrete_threshold: below_discrete,
            n_dofs: map.n_free(),
            mesh_h: params.h_over_eps * eps / (1usize << params.refinements) as f64,
        },
        mesh,
        modes,
    })
}

/// Fraction of `∫ u²` carried by the part of the mesh with `x < x_max`.
pub fn mass_fraction_below(mesh: &Mesh, u: &[f64], x_max: f64) -> f64 {
    let total = crate::fem::integrate_field(mesh, u, |p| p.value * p.value);
    let part =
        crate::fem::integrate_field(
            mesh,
            u,
            |p| if p.x < x_max { p.value * p.value } else { 0.0 },
        );
    part / total
}
