//! One-dimensional Robin model problems
//! `−γ'' = ηγ` on `(0,1)`, `γ(1) = 0`, `γ'(0) = −c γ(0)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::dense::dense_generalized_eigen;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelVariant {
    /// Perturbation of a positive threshold angle: `c = 2τB`.
    ThresholdK,
    /// Perturbation of the zero angle: `c = 2τ²D`.
    ZeroAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobinModel {
    pub variant: ModelVariant,
    pub tau: f64,
    /// `B` for [`ModelVariant::ThresholdK`], `D` for [`ModelVariant::ZeroAngle`].
    pub constant: f64,
}

impl RobinModel {
    pub fn new(variant: ModelVariant, tau: f64, constant: f64) -> Result<Self> {
        if !(constant > 0.0) || !constant.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "model constant must be positive, got {constant}"
            )));
        }
        if !tau.is_finite() {
            return Err(Error::InvalidArgument("tau must be finite".into()));
        }
        Ok(Self {
            variant,
            tau,
            constant,
        })
    }

    pub fn threshold_k(tau: f64, b: f64) -> Result<Self> {
        Self::new(ModelVariant::ThresholdK, tau, b)
    }

    pub fn zero_angle(tau: f64, d: f64) -> Result<Self> {
        Self::new(ModelVariant::ZeroAngle, tau, d)
    }

    /// Robin coefficient `c` in `γ'(0) = −c γ(0)`.
    pub fn robin_coeff(&self) -> f64 {
        match self.variant {
            ModelVariant::ThresholdK => 2.0 * self.tau * self.constant,
            ModelVariant::ZeroAngle => 2.0 * self.tau * self.tau * self.constant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    DispersionRoot,
    Fem1d,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpectrum {
    pub etas: Vec<f64>,
    pub method: SpectrumMethod,
}

const ROOT_TOL: f64 = 1e-13;
const POLE_MARGIN: f64 = 1e-10;

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Result<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Invariant(format!("no sign change on [{a}, {b}]")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a < ROOT_TOL * m.abs().max(1.0) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Eigenvalues for Robin coefficient `c`, from the dispersion relations
/// `√|η| coth √|η| = c` (η < 0) and `√η cot √η = c` (η > 0).
pub fn dispersion_eigenvalues_for(c: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut etas = Vec::with_capacity(count);
    if c > 1.0 + 1e-15 {
        // k coth k increases from 1 and k < k coth k ≤ k + 1, so k ∈ [c−1, c]
        let k = bisect(|k| k * (1.0 / k.tanh()) - c, (c - 1.0).max(1e-300), c)?;
        etas.push(-k * k);
    } else if (c - 1.0).abs() <= 1e-15 {
        etas.push(0.0);
    }
    let mut q = 1usize;
    while etas.len() < count {
        let (lo, hi) = ((q - 1) as f64 * PI, q as f64 * PI);
        // branch 1 holds a root only when k cot k (→ 1 at k = 0) exceeds c
        if q > 1 || c < 1.0 - 1e-15 {
            let f = |k: f64| k * k.cos() - c * k.sin();
            let a = if q == 1 { 0.0 } else { lo + POLE_MARGIN };
            let f_at = |k: f64| {
                if k == 0.0 {
                    1.0 - c
                } else {
                    f(k) / k.sin().abs()
                }
            };
            let k = bisect(f_at, a, hi - POLE_MARGIN)?;
            etas.push(k * k);
        }
        q += 1;
        if q > count + 2 {
            return Err(Error::Invariant("dispersion bracket exhausted".into()));
        }
    }
    etas.truncate(count);
    Ok(etas)
}

pub fn dispersion_eigenvalues(model: &RobinModel, count: usize) -> Result<ModelSpectrum> {
    Ok(ModelSpectrum {
        etas: dispersion_eigenvalues_for(model.robin_coeff(), count)?,
        method: SpectrumMethod::DispersionRoot,
    })
}

/// P2 finite elements on a uniform grid of `(0,1)`.
pub fn fem1d_eigenvalues_for(c: f64, n_elements: usize, count: usize) -> Result<Vec<f64>> {
    if n_elements < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 elements, got {n_elements}"
        )));
    }
    let h = 1.0 / n_elements as f64;
    // node 2e is the left end of element e, 2e+1 its midpoint; node 2n (x=1) is dropped
    let dim = 2 * n_elements;
    if count == 0 || count > dim {
        return Err(Error::InvalidArgument(format!(
            "count must be in 1..={dim}"
        )));
    }
    let ke =
        [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]].map(|r| r.map(|v| v / (3.0 * h)));
    let me =
        [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]].map(|r| r.map(|v| v * h / 30.0));
    let mut k = DMatrix::zeros(dim, dim);
    let mut m = DMatrix::zeros(dim, dim);
    for e in 0..n_elements {
        let nodes = [2 * e, 2 * e + 1, 2 * e + 2];
        for i in 0..3 {
            for j in 0..3 {
                if nodes[i] < dim && nodes[j] < dim {
                    k[(nodes[i], nodes[j])] += ke[i][j];
                    m[(nodes[i], nodes[j])] += me[i][j];
                }
            }
        }
    }
    k[(0, 0)] -= c;
    let (vals, _) = dense_generalized_eigen(&k, &m)?;
    Ok(vals[..count].to_vec())
}

pub fn fem1d_eigenvalues(
    model: &RobinModel,
    n_elements: usize,
    count: usize,
) -> Result<ModelSpectrum> {
    Ok(ModelSpectrum {
        etas: fem1d_eigenvalues_for(model.robin_coeff(), n_elements, count)?,
        method: SpectrumMethod::Fem1d,
    })
}

/// Large-`τ` behaviour of the lowest eigenvalue: `−c²`, i.e. `−4B²τ²` or `−4D²τ⁴`.
pub fn fall_asymptote(model: &RobinModel) -> f64 {
    let c = model.robin_coeff();
    -c * c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauLimit {
    PlusInfinity,
    MinusInfinity,
}

/// Limit of `η_q` as `τ → ±∞`.
pub fn limit_spectrum(variant: ModelVariant, limit: TauLimit, q: usize) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument(
            "eigenvalue index starts at 1".into(),
        ));
    }
    let qf = q as f64;
    Ok(match (variant, limit) {
        (ModelVariant::ThresholdK, TauLimit::MinusInfinity) => qf * qf * PI * PI,
        _ if q == 1 => f64::NEG_INFINITY,
        _ => (qf - 1.0).powi(2) * PI * PI,
    })
}
