//! The constants `B` (at a positive threshold angle) and `D` (at the angle
//! zero) of the Robin model problems.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::field::{solve_threshold_field, NearFieldParams, ThresholdField};
use super::scan::refine_threshold_near;
use crate::error::{Error, Result};
use crate::fem::{
    apply_dirichlet, assemble_boundary_load, assemble_stiffness_mass, gauss_unit, integrate_field,
    GammaTrace, GammaWeight,
};
use crate::geometry::{build_halfstrip_mesh, EdgeTag, GradingSpec, HalfStripGeom, Mesh};

/// `|S + 1|` allowed at the angle where `B` is evaluated.
pub const THRESHOLD_S_TOL: f64 = 1e-2;
/// Largest allowed `‖Re W‖/‖Im W‖` when extracting the real representative.
pub const IMAG_RATIO_TOL: f64 = 1e-2;

/// Summary record of the model constants.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ModelConstants {
    #[serde(rename = "B")]
    pub b: Option<f64>,
    #[serde(rename = "B_rellich")]
    pub b_rellich: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
}

impl ModelConstants {
    pub fn with_b(mut self, b: &BConstant) -> Self {
        self.b = Some(b.b);
        self.b_rellich = Some(b.b_rellich);
        self
    }

    pub fn with_d(mut self, d: &DConstant) -> Self {
        self.d = Some(d.d);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BConstant {
    /// Angle supplied by the caller.
    pub alpha_input: f64,
    /// Angle actually used, where `S = −1` on the current mesh.
    pub alpha_star: f64,
    pub s_re: f64,
    pub s_im: f64,
    /// Boundary form with the corner expansion near the end of Γ.
    pub b: f64,
    /// Volume form `2/(cos α sin α) ∫ (∂_x v)²`.
    pub b_rellich: f64,
    /// Boundary form from the finite-element trace alone.
    pub b_trace_only: f64,
    pub imag_ratio: f64,
    pub relative_gap: f64,
    pub truncation_l: f64,
    pub mesh_h: f64,
}

/// Bessel function `J_ν(x)` and its derivative for `ν ≥ 0` and moderate `x`.
pub fn bessel_j(nu: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        let v = if nu == 0.0 { 1.0 } else { 0.0 };
        let d = if nu == 1.0 {
            0.5
        } else if nu < 1.0 && nu > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        return (v, d);
    }
    let half = 0.5 * x;
    let mut term = half.powf(nu) / gamma(nu + 1.0);
    let (mut v, mut d) = (0.0, 0.0);
    for m in 0..200 {
        let mf = m as f64;
        v += term;
        d += term * (2.0 * mf + nu) / x;
        let next = -term * half * half / ((mf + 1.0) * (mf + nu + 1.0));
        if next.abs() < 1e-17 * v.abs().max(1e-300) && m > 2 {
            break;
        }
        term = next;
    }
    (v, d)
}

/// Corner expansion of the trace near the Dirichlet end of Γ.
#[derive(Debug, Clone, PartialEq)]
struct CornerFit {
    nus: Vec<f64>,
    coeffs: Vec<f64>,
}

impl CornerFit {
    fn eval(&self, r: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut dv = 0.0;
        for (nu, a) in self.nus.iter().zip(&self.coeffs) {
            let (j, dj) = bessel_j(*nu, PI * r);
            v += a * j;
            dv += a * PI * dj;
        }
        (v, dv)
    }
}

const CORNER_RADIUS: f64 = 0.25;
const CORNER_TERMS: usize = 5;

/// Least-squares fit of `Σ a_k J_{ν_k}(π r)` to trace values with
/// `r ∈ [ρ/8, ρ]`, `ν_k = (2k−1)π/(2ω)` and `ω = π/2 + α`.
fn fit_corner(trace: &GammaTrace, alpha: f64, rho: f64) -> Result<CornerFit> {
    let len = trace.length();
    let omega = 0.5 * PI + alpha;
    let nus: Vec<f64> = (1..=CORNER_TERMS)
        .map(|k| (2 * k - 1) as f64 * PI / (2.0 * omega))
        .collect();
    let mut samples = Vec::new();
    let bp = trace.breakpoints();
    for w in bp.windows(2) {
        for s in [w[0], 0.5 * (w[0] + w[1])] {
            let r = len - s;
            if r >= rho / 8.0 && r <= rho {
                samples.push((r, trace.eval(s).0));
            }
        }
    }
    if samples.len() < 2 * CORNER_TERMS {
        return Err(Error::InvalidMesh(format!(
            "only {} trace nodes near the corner; refine the mesh",
            samples.len()
        )));
    }
    let a = DMatrix::from_fn(samples.len(), nus.len(), |i, k| {
        bessel_j(nus[k], PI * samples[i].0).0
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(CornerFit {
        nus,
        coeffs: x.iter().copied().collect(),
    })
}

/// `∫_Γ s((∂_s f)² − π² f²) ds` with the last `ρ` of Γ replaced by the
/// corner expansion, integrated after the substitution `r = ρ t^m`.
pub fn gamma_energy(mesh: &Mesh, field: &[f64], alpha: f64) -> Result<(f64, f64)> {
    let trace = GammaTrace::new(mesh, field)?;
    let len = trace.length();
    let whole = trace.integrals(GammaWeight::ArcLength, 0.0, len);
    let trace_only = whole.tangential_sq - PI * PI * whole.value_sq;
    let rho = CORNER_RADIUS.min(0.5 * len);
    let fit = fit_corner(&trace, alpha, rho)?;
    let far = trace.integrals(GammaWeight::ArcLength, 0.0, len - rho);
    let mut total = far.tangential_sq - PI * PI * far.value_sq;
    let m = 1.0 / (2.0 * fit.nus[0] - 1.0).max(0.05);
    let panels = 64;
    for p in 0..panels {
        for (u, w) in gauss_unit(5) {
            let t = (p as f64 + u) / panels as f64;
            let r = rho * t.powf(m);
            let jac = rho * m * t.powf(m - 1.0) / panels as f64;
            let (v, dv) = fit.eval(r);
            total += w * jac * (len - r) * (dv * dv - PI * PI * v * v);
        }
    }
    Ok((total, trace_only))
}

/// `B` at the threshold angle nearest to `alpha_star` (searched within
/// `±0.02`), from the real representative `v = Ŵ₊/(2i)`.
pub fn constant_b(alpha_star: f64, params: &NearFieldParams) -> Result<BConstant> {
    let mut alpha = alpha_star;
    let mut field = solve_threshold_field(alpha, params)?;
    if (field.s + 1.0).norm() >= 1e-6 {
        alpha = refine_threshold_near(alpha_star, 0.02, params, 1e-9)?;
        field = solve_threshold_field(alpha, params)?;
    }
    if !((field.s + 1.0).norm() < THRESHOLD_S_TOL) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} is not a threshold angle: |S + 1| = {:.3e}",
            (field.s + 1.0).norm()
        )));
    }
    b_from_field(alpha_star, &field, params.h)
}

fn b_from_field(alpha_input: f64, field: &ThresholdField, h: f64) -> Result<BConstant> {
    let alpha = field.geom.alpha;
    let v: Vec<f64> = field
        .values
        .iter()
        .map(|w| (w / Complex64::new(0.0, 2.0)).re)
        .collect();
    let rest: f64 = field
        .values
        .iter()
        .map(|w| (w / Complex64::new(0.0, 2.0)).im.powi(2))
        .sum::<f64>()
        .sqrt();
    let imag_ratio = rest / v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(imag_ratio < IMAG_RATIO_TOL) {
        return Err(Error::Invariant(format!(
            "threshold field at alpha = {alpha} is not real up to 2i: imaginary ratio {imag_ratio:.3e}"
        )));
    }
    let (b, b_trace_only) = gamma_energy(&field.mesh, &v, alpha)?;
    let b_rellich = rellich_b(&field.mesh, &v, alpha);
    Ok(BConstant {
        alpha_input,
        alpha_star: alpha,
        s_re: field.s.re,
        s_im: field.s.im,
        b,
        b_rellich,
        b_trace_only,
        imag_ratio,
        relative_gap: (b - b_rellich).abs() / b.abs(),
        truncation_l: field.geom.truncation_l,
        mesh_h: h,
    })
}

/// `2/(cos α sin α) ∫ (∂_x v)²` over the truncated half-strip.
pub fn rellich_b(mesh: &Mesh, v: &[f64], alpha: f64) -> f64 {
    2.0 / (alpha.cos() * alpha.sin()) * integrate_field(mesh, v, |p| p.grad[0] * p.grad[0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDerivative {
    pub alpha_star: f64,
    /// `∫_Γ s(|∂_s W₊|² − π²|W₊|²) ds`, the predicted `d arg S / dα`.
    pub analytic: f64,
    /// Centered difference of the phase over `[α − δ/2, α + δ/2]`.
    pub finite_difference: f64,
    pub step: f64,
    pub relative_gap: f64,
    pub counter_clockwise: bool,
}

/// Compares the analytic phase velocity at a threshold angle with a
/// centered finite difference of step `1e-3`.
pub fn phase_derivative_check(
    alpha_star: f64,
    params: &NearFieldParams,
) -> Result<PhaseDerivative> {
    let b = constant_b(alpha_star, params)?;
    let alpha = b.alpha_star;
    let field = solve_threshold_field(alpha, params)?;
    let re: Vec<f64> = field.values.iter().map(|w| w.re).collect();
    let im: Vec<f64> = field.values.iter().map(|w| w.im).collect();
    let analytic =
        gamma_energy(&field.mesh, &re, alpha)?.0 + gamma_energy(&field.mesh, &im, alpha)?.0;
    let step = 1e-3;
    let lo = solve_threshold_field(alpha - 0.5 * step, params)?.s;
    let hi = solve_threshold_field(alpha + 0.5 * step, params)?.s;
    let finite_difference = (hi / lo).arg() / step;
    Ok(PhaseDerivative {
        alpha_star: alpha,
        analytic,
        finite_difference,
        step,
        relative_gap: (analytic - finite_difference).abs() / finite_difference.abs(),
        counter_clockwise: analytic > 0.0 && finite_difference > 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DConstant {
    pub truncation_l: f64,
    pub mesh_h: f64,
    /// `∫ |∇U|² − π² U²`.
    pub d: f64,
    pub u_norm_sq: f64,
    /// `3π² ∫ U²`.
    pub lower_bound: f64,
    /// `∫ (U(X,Y) + U(X,1−Y))² / ∫ U²`.
    pub oddness_defect: f64,
    /// Fourier series value of `D` on the infinite strip.
    pub series: f64,
}

/// Series `Σ_{n even} 8n²/(π(n²−1)^{5/2})` for `D` on the infinite strip.
pub fn d_series(terms: usize) -> f64 {
    (1..=terms)
        .map(|j| {
            let n = (2 * j) as f64;
            8.0 * n * n / (PI * (n * n - 1.0).powf(2.5))
        })
        .sum()
}

/// `∫ U²` from the same series.
pub fn u_norm_sq_series(terms: usize) -> f64 {
    (1..=terms)
        .map(|j| {
            let n = (2 * j) as f64;
            let k = PI * (n * n - 1.0).sqrt();
            let a = 4.0 * n / (k * (n * n - 1.0));
            a * a / (4.0 * k)
        })
        .sum()
}

/// Solves `ΔU + π²U = 0` on `(0, L) × (0, 1)` with `U = 0` on the walls and
/// at `X = L`, and `∂_n U = −π cos(πY)` at `X = 0`.
pub fn constant_d(truncation_l: f64, h: f64) -> Result<DConstant> {
    if !(truncation_l >= NearFieldParams::DECAY_MARGIN) {
        return Err(Error::InvalidArgument(format!(
            "truncation L = {truncation_l} must be at least 4"
        )));
    }
    let geom = HalfStripGeom::new(0.0, truncation_l)?;
    let mesh = build_halfstrip_mesh(&geom, h, &GradingSpec::uniform())?;
    let (k, m) = assemble_stiffness_mass(&mesh);
    let a = k.linear_combination(1.0, &m, -PI * PI);
    let load = assemble_boundary_load(&mesh, EdgeTag::FreeSide, |_, y| -PI * (PI * y).cos())?;
    let tags = [EdgeTag::DirichletWall, EdgeTag::ArtificialBoundary];
    let (ac, map) = apply_dirichlet(&a, &mesh, &tags)?;
    let sol = crate::linalg::SparseSolver::new(&ac)?;
    let (x, residual) = sol.solve_with_residual(&map.restrict(&load));
    if !(residual < crate::linalg::REFINE_TOL.max(sol.rounding_floor(&x, &map.restrict(&load)))) {
        return Err(Error::Singular {
            condition: sol.pivot_ratio(),
        });
    }
    let u = map.extend(&x);
    let d: f64 = u.iter().zip(&load).map(|(a, b)| a * b).sum();
    let u_norm_sq = m.bilinear(&u, &u);
    let mirror = mirror_permutation(&mesh)?;
    let sum: Vec<f64> = (0..u.len()).map(|i| u[i] + u[mirror[i]]).collect();
    let oddness_defect = m.bilinear(&sum, &sum) / u_norm_sq;
    Ok(DConstant {
        truncation_l,
        mesh_h: h,
        d,
        u_norm_sq,
        lower_bound: 3.0 * PI * PI * u_norm_sq,
        oddness_defect,
        series: d_series(10_000),
    })
}

/// Node index of the reflection `(X, 1 − Y)` of every node.
fn mirror_permutation(mesh: &Mesh) -> Result<Vec<usize>> {
    let key = |x: f64, y: f64| ((x * 1e9).round() as i64, (y * 1e9).round() as i64);
    let index: HashMap<_, _> = mesh
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, p)| (key(p[0], p[1]), i))
        .collect();
    mesh.nodes()
        .iter()
        .map(|p| {
            index.get(&key(p[0], 1.0 - p[1])).copied().ok_or_else(|| {
                Error::InvalidMesh("mesh nodes are not symmetric about Y = 1/2".into())
            })
        })
        .collect()
}
