//! Eigenvalue curves `α ↦ λ_p(α)` on a fixed trapezoid thickness.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::spectrum::{trapezoid_spectrum, TrapezoidParams};
use crate::error::{Error, Result};
use crate::geometry::GammaBc;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiveRow {
    pub alpha: f64,
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues minus the discrete threshold.
    pub normalized: Vec<f64>,
    pub below_threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiveTable {
    pub eps: f64,
    pub gamma_bc: GammaBc,
    pub threshold: f64,
    pub discrete_threshold: f64,
    pub rows: Vec<DiveRow>,
    /// `branches[j][i]` is branch `j` at `rows[i]`, followed by nearest
    /// neighbour from one angle to the next.
    pub branches: Vec<Vec<f64>>,
}

pub fn dive_sweep(
    eps: f64,
    alphas: &[f64],
    gamma_bc: GammaBc,
    count: usize,
    params: &TrapezoidParams,
) -> Result<DiveTable> {
    if alphas.is_empty() || count == 0 {
        return Err(Error::InvalidArgument(
            "need at least one angle and one eigenvalue".into(),
        ));
    }
    let spectra = alphas
        .par_iter()
        .map(|&a| trapezoid_spectrum(eps, a, gamma_bc, count, params))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<DiveRow> = spectra
        .iter()
        .map(|s| DiveRow {
            alpha: s.alpha,
            eigenvalues: s.eigenvalues.clone(),
            normalized: s.normalized(),
            below_threshold: s.below_threshold,
        })
        .collect();
    let branches = track_branches(
        &rows
            .iter()
            .map(|r| r.eigenvalues.clone())
            .collect::<Vec<_>>(),
    );
    Ok(DiveTable {
        eps,
        gamma_bc,
        threshold: spectra[0].threshold,
        discrete_threshold: spectra[0].discrete_threshold,
        rows,
        branches,
    })
}

/// Greedy nearest-neighbour matching of eigenvalue lists across columns:
/// pairs are taken in order of increasing distance.
pub fn track_branches(columns: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let Some(first) = columns.first() else {
        return Vec::new();
    };
    let mut branches: Vec<Vec<f64>> = first.iter().map(|&v| vec![v]).collect();
    for col in &columns[1..] {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (j, b) in branches.iter().enumerate() {
            let last = *b.last().unwrap();
            for (i, &v) in col.iter().enumerate() {
                pairs.push(((v - last).abs(), j, i));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut taken_b = vec![false; branches.len()];
        let mut taken_v = vec![false; col.len()];
        let mut next = vec![f64::NAN; branches.len()];
        for (_, j, i) in pairs {
            if !taken_b[j] && !taken_v[i] {
                taken_b[j] = true;
                taken_v[i] = true;
                next[j] = col[i];
            }
        }
        for (b, v) in branches.iter_mut().zip(next) {
            b.push(v);
        }
    }
    branches
}

impl DiveTable {
    /// Header `alpha,threshold,lambda_1..,below_count`, values in `{:.11e}`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self
            .rows
            .iter()
            .map(|r| r.eigenvalues.len())
            .max()
            .unwrap_or(0);
        let mut header = vec!["alpha".to_string(), "threshold".to_string()];
        header.extend((1..=n).map(|p| format!("lambda_{p}")));
        header.push("below_count".into());
        writeln!(w, "{}", header.join(","))?;
        for r in &self.rows {
            let mut cells = vec![
                format!("{:.11e}", r.alpha),
                format!("{:.11e}", self.threshold),
            ];
            cells.extend(r.eigenvalues.iter().map(|v| format!("{v:.11e}")));
            cells.push(r.below_threshold.to_string());
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}
