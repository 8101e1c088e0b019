//! Shift-invert subspace iteration for `K u = λ M u` with spectrum slicing.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::dense::{dense_generalized_eigen, to_dense};
use crate::linalg::ordering::{reverse_cuthill_mckee, Permutation};
use crate::linalg::{ProfileLdlt, SparseSymMatrix};

/// How an [`EigenResult`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    Dense,
    ShiftInvert,
}

/// Eigenpairs sorted ascending with `M`-orthonormal vectors.
///
/// `residual_norms[i]` is `‖K u − λ M u‖ / (|λ| ‖M u‖)` in the Euclidean norm.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
    pub iterations: usize,
    pub method: EigenMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GevpOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Problems with at most this many unknowns are solved densely.
    pub dense_threshold: usize,
    /// Relative gap below which neighbouring eigenvalues form one cluster.
    pub cluster_tol: f64,
}

impl Default for GevpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 400,
            seed: 0x7ab1e,
            dense_threshold: 400,
            cluster_tol: 1e-6,
        }
    }
}

/// Largest problem accepted by [`dense_spectrum`].
pub const DENSE_ORACLE_LIMIT: usize = 2000;

/// The `count` eigenvalues nearest above `shift`, plus any eigenvalues
/// clustered with the last one.
pub fn solve_gevp_smallest(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    shift: f64,
) -> Result<EigenResult> {
    solve_gevp_with(k, m, count, shift, &GevpOptions::default())
}

pub fn solve_gevp_with(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    shift: f64,
    opts: &GevpOptions,
) -> Result<EigenResult> {
    let n = k.nrows();
    if k.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "K is {}x{}, M is {}x{}",
            k.nrows(),
            k.ncols(),
            m.nrows(),
            m.ncols()
        )));
    }
    if count == 0 || count > n {
        return Err(Error::InvalidArgument(format!(
            "count must be in 1..={n}, got {count}"
        )));
    }
    if n <= opts.dense_threshold {
        dense_path(k, m, count, shift, opts)
    } else {
        ShiftInvert::new(k, m, shift, opts)?.run(count)
    }
}

/// Every eigenvalue of a small pencil, used as an independent oracle.
pub fn dense_spectrum(k: &SparseSymMatrix, m: &SparseSymMatrix) -> Result<Vec<f64>> {
    if k.nrows() > DENSE_ORACLE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "dense oracle limited to {DENSE_ORACLE_LIMIT} unknowns, got {}",
            k.nrows()
        )));
    }
    Ok(dense_generalized_eigen(&to_dense(k), &to_dense(m))?.0)
}

/// Number of eigenvalues of `K u = λ M u` strictly below `sigma`.
pub fn count_eigenvalues_below(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    sigma: f64,
) -> Result<usize> {
    let (rp, ci) = k.pattern();
    let perm = reverse_cuthill_mckee(rp, ci);
    Ok(factor_shifted(k, m, sigma, &perm)?.1.negative_count())
}

fn select(vals: &[f64], shift: f64, count: usize, cluster_tol: f64) -> Option<Vec<usize>> {
    let above: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > shift).collect();
    if above.len() < count {
        return None;
    }
    let mut take = count;
    while take < above.len() {
        let (a, b) = (vals[above[take - 1]], vals[above[take]]);
        if (b - a).abs() <= cluster_tol * a.abs().max(b.abs()) {
            take += 1;
        } else {
            break;
        }
    }
    // a cluster reaching the end of the block may be incomplete
    if take == above.len() && take > count {
        return None;
    }
    Some(above[..take].to_vec())
}

fn residual(k: &SparseSymMatrix, m: &SparseSymMatrix, lambda: f64, u: &[f64]) -> f64 {
    let (ku, mu) = (k.matvec(u), m.matvec(u));
    let r: f64 = ku
        .iter()
        .zip(&mu)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let mn = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
    r / (lambda.abs().max(f64::MIN_POSITIVE) * mn)
}

fn fix_sign(u: &mut [f64]) {
    let big = u
        .iter()
        .copied()
        .fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    if big < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
}

fn dense_path(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    shift: f64,
    opts: &GevpOptions,
) -> Result<EigenResult> {
    let (vals, vecs) = dense_generalized_eigen(&to_dense(k), &to_dense(m))?;
    let idx = select(&vals, shift, count, opts.cluster_tol)
        .or_else(|| {
            let above = vals.iter().filter(|&&v| v > shift).count();
            (above >= count).then(|| (vals.len() - above..vals.len()).collect())
        })
        .ok_or_else(|| {
            Error::InvalidArgument(format!("fewer than {count} eigenvalues above {shift}"))
        })?;
    let mut out = EigenResult {
        eigenvalues: Vec::new(),
        eigenvectors: Vec::new(),
        residual_norms: Vec::new(),
        iterations: 1,
        method: EigenMethod::Dense,
    };
    for i in idx {
        let mut u: Vec<f64> = vecs.column(i).iter().copied().collect();
        fix_sign(&mut u);
        out.residual_norms.push(residual(k, m, vals[i], &u));
        out.eigenvalues.push(vals[i]);
        out.eigenvectors.push(u);
    }
    Ok(out)
}

fn factor_shifted(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    sigma: f64,
    perm: &Permutation,
) -> Result<(f64, ProfileLdlt<f64>)> {
    let mut s = sigma;
    for attempt in 1..=6 {
        let a = k.linear_combination(1.0, m, -s);
        match ProfileLdlt::factor_with(&a, perm.clone()) {
            Ok(f) => return Ok((s, f)),
            Err(Error::Breakdown { .. }) => s -= 1e-7 * s.abs().max(1.0) * attempt as f64,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Singular {
        condition: f64::INFINITY,
    })
}

struct Ritz {
    theta: Vec<f64>,
    x: DMatrix<f64>,
    mx: DMatrix<f64>,
    res: Vec<f64>,
}

struct ShiftInvert<'a> {
    k: &'a SparseSymMatrix,
    m: &'a SparseSymMatrix,
    opts: &'a GevpOptions,
    perm: Permutation,
    shift: f64,
    below: usize,
    factor0: ProfileLdlt<f64>,
    rng: ChaCha8Rng,
    iterations: usize,
}

fn columns_apply(y: &DMatrix<f64>, f: impl Fn(&[f64]) -> Vec<f64> + Sync) -> DMatrix<f64> {
    let cols: Vec<Vec<f64>> = (0..y.ncols())
        .into_par_iter()
        .map(|j| f(y.column(j).as_slice()))
        .collect();
    DMatrix::from_fn(y.nrows(), y.ncols(), |i, j| cols[j][i])
}

impl<'a> ShiftInvert<'a> {
    fn new(
        k: &'a SparseSymMatrix,
        m: &'a SparseSymMatrix,
        shift: f64,
        opts: &'a GevpOptions,
    ) -> Result<Self> {
        let pattern = k.linear_combination(1.0, m, 1.0);
        let (rp, ci) = pattern.pattern();
        let perm = reverse_cuthill_mckee(rp, ci);
        let (shift, factor0) = factor_shifted(k, m, shift, &perm)?;
        let below = factor0.negative_count();
        Ok(Self {
            k,
            m,
            opts,
            perm,
            shift,
            below,
            factor0,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            iterations: 0,
        })
    }

    fn random_block(&mut self, p: usize) -> DMatrix<f64> {
        let n = self.k.nrows();
        DMatrix::from_fn(n, p, |_, _| self.rng.random_range(-1.0..1.0))
    }

    /// `M`-orthonormalizes `y` in place, tracking `M y` alongside.
    fn orthonormalize(&mut self, y: &mut DMatrix<f64>) -> DMatrix<f64> {
        let m = self.m;
        let mut my = columns_apply(y, |c| m.matvec(c));
        let p = y.ncols();
        for j in 0..p {
            for _pass in 0..2 {
                for i in 0..j {
                    let c = my.column(i).dot(&y.column(j));
                    let (yi, myi) = (y.column(i).clone_owned(), my.column(i).clone_owned());
                    y.column_mut(j).axpy(-c, &yi, 1.0);
                    my.column_mut(j).axpy(-c, &myi, 1.0);
                }
            }
            let nrm = my.column(j).dot(&y.column(j));
            if !(nrm > 1e-24) {
                // collapsed column: replace by a fresh random direction
                let fresh = self.random_block(1);
                y.set_column(j, &fresh.column(0));
                let mf = m.matvec(fresh.column(0).as_slice());
                my.set_column(j, &nalgebra::DVector::from_vec(mf));
                for i in 0..j {
                    let c = my.column(i).dot(&y.column(j));
                    let (yi, myi) = (y.column(i).clone_owned(), my.column(i).clone_owned());
                    y.column_mut(j).axpy(-c, &yi, 1.0);
                    my.column_mut(j).axpy(-c, &myi, 1.0);
                }
            }
            let s = my.column(j).dot(&y.column(j)).sqrt();
            y.column_mut(j).scale_mut(1.0 / s);
            my.column_mut(j).scale_mut(1.0 / s);
        }
        my
    }

    fn rayleigh_ritz(&mut self, mut y: DMatrix<f64>) -> Ritz {
        let my = self.orthonormalize(&mut y);
        let k = self.k;
        let ky = columns_apply(&y, |c| k.matvec(c));
        let mut kr = y.transpose() * &ky;
        kr = (&kr + kr.transpose()) * 0.5;
        let eig = SymmetricEigen::new(kr);
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let q = DMatrix::from_fn(y.ncols(), idx.len(), |i, j| eig.eigenvectors[(i, idx[j])]);
        let theta: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let (x, mx, kx) = (&y * &q, &my * &q, &ky * &q);
        let res = (0..theta.len())
            .map(|j| {
                let r = (kx.column(j) - mx.column(j) * theta[j]).norm();
                r / (theta[j].abs().max(f64::MIN_POSITIVE) * mx.column(j).norm())
            })
            .collect();
        Ritz { theta, x, mx, res }
    }

    fn step(&mut self, f: &ProfileLdlt<f64>, ritz: &Ritz) -> Ritz {
        self.iterations += 1;
        let y = columns_apply(&ritz.mx, |c| f.solve(c));
        self.rayleigh_ritz(y)
    }

    /// Moves the pole just below the wanted eigenvalues, using inertia to
    /// make sure no eigenvalue in `(shift, σ)` is skipped.
    fn place_pole(
        &self,
        estimate_lo: f64,
        estimate_hi: f64,
    ) -> Result<Option<(f64, ProfileLdlt<f64>)>> {
        let spread = (estimate_hi - estimate_lo).max(1e-6 * estimate_lo.abs());
        let (mut lo, mut hi) = (self.shift, estimate_lo);
        let mut candidate = estimate_lo - 0.1 * spread;
        let mut best = None;
        for _ in 0..40 {
            if candidate <= lo {
                break;
            }
            let (s, f) = factor_shifted(self.k, self.m, candidate, &self.perm)?;
            if f.negative_count() == self.below {
                lo = s;
                best = Some((s, f));
            } else {
                hi = s;
            }
            if hi - lo <= 0.25 * spread {
                break;
            }
            candidate = 0.5 * (lo + hi);
        }
        Ok(best)
    }

    fn run(mut self, count: usize) -> Result<EigenResult> {
        let n = self.k.nrows();
        let mut p = (2 * count).max(count + 8).min(n);
        let mut restarts = 0;
        loop {
            let y0 = self.random_block(p);
            let f0 = self.factor0.clone();
            let mut ritz = self.rayleigh_ritz(y0);
            for _ in 0..8 {
                ritz = self.step(&f0, &ritz);
            }
            let mut pole = None;
            if let Some(idx) = select(&ritz.theta, self.shift, count, self.opts.cluster_tol) {
                let last = *idx.last().unwrap();
                let hi = ritz
                    .theta
                    .get(last + 1)
                    .copied()
                    .unwrap_or(ritz.theta[last]);
                pole = self.place_pole(ritz.theta[idx[0]], hi)?;
            }
            let f = pole.map_or(f0, |(_, f)| f);
            let mut wanted = None;
            for _ in 0..self.opts.max_iter {
                ritz = self.step(&f, &ritz);
                if let Some(idx) = select(&ritz.theta, self.shift, count, self.opts.cluster_tol) {
                    if idx.iter().all(|&i| ritz.res[i] < self.opts.tol) {
                        wanted = Some(idx);
                        break;
                    }
                }
            }
            let Some(idx) = wanted else {
                if p < n && restarts < 3 {
                    p = (2 * p).min(n);
                    restarts += 1;
                    continue;
                }
                let res: Vec<f64> = select(&ritz.theta, self.shift, count, f64::MIN_POSITIVE)
                    .map(|idx| idx.iter().map(|&i| ritz.res[i]).collect())
                    .unwrap_or_else(|| ritz.res.clone());
                let worst = res.iter().copied().fold(0.0, f64::max);
                return Err(Error::NoConvergence {
                    iterations: self.iterations,
                    worst,
                    residuals: res,
                });
            };
            // every eigenvalue in (shift, top] must have been found
            let top = ritz.theta[*idx.last().unwrap()];
            let next = ritz
                .theta
                .get(idx.last().unwrap() + 1)
                .copied()
                .unwrap_or(f64::INFINITY);
            let probe = top
                + (0.5 * (next - top))
                    .min(self.opts.cluster_tol * top.abs() * 10.0)
                    .max(f64::EPSILON * top.abs());
            let (_, fp) = factor_shifted(self.k, self.m, probe, &self.perm)?;
            let inside = fp.negative_count().saturating_sub(self.below);
            if inside > idx.len() {
                if p < n && restarts < 3 {
                    p = (2 * p).min(n);
                    restarts += 1;
                    continue;
                }
                return Err(Error::Invariant(format!(
                    "eigensolver found {} eigenvalues in ({}, {top}] but inertia counts {inside}",
                    idx.len(),
                    self.shift
                )));
            }
            let mut out = EigenResult {
                eigenvalues: Vec::new(),
                eigenvectors: Vec::new(),
                residual_norms: Vec::new(),
                iterations: self.iterations,
                method: EigenMethod::ShiftInvert,
            };
            for i in idx {
                let mut u: Vec<f64> = ritz.x.column(i).iter().copied().collect();
                fix_sign(&mut u);
                out.eigenvalues.push(ritz.theta[i]);
                out.residual_norms.push(ritz.res[i]);
                out.eigenvectors.push(u);
            }
            return Ok(out);
        }
    }
}
