//! Banded LU with partial pivoting, used when LDLᵀ breaks down on an
//! indefinite matrix.

use super::ordering::{reverse_cuthill_mckee, Permutation};
use super::scalar::Scalar;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    perm: Permutation,
    n: usize,
    kl: usize,
    // row-major band storage of width kl + ku + kl (fill-in from pivoting)
    width: usize,
    band: Vec<T>,
    pivots: Vec<usize>,
    max_pivot: f64,
    min_pivot: f64,
}

impl<T: Scalar> BandedLu<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                n,
                a.ncols()
            )));
        }
        let (rp, ci) = a.pattern();
        let perm = reverse_cuthill_mckee(rp, ci);
        let mut kl = 0;
        let mut ku = 0;
        for (i, j, _) in a.triplets() {
            let (pi, pj) = (perm.old_to_new[i], perm.old_to_new[j]);
            if pi > pj {
                kl = kl.max(pi - pj);
            } else {
                ku = ku.max(pj - pi);
            }
        }
        let width = 2 * kl + ku + 1;
        let mut band = vec![T::zero(); n * width];
        // entry (i, j) lives at i*width + (j + kl - i) for j in [i-kl, i+kl+ku]
        let idx = |i: usize, j: usize| i * width + (j + kl - i);
        let mut scale = 0.0f64;
        for (i, j, v) in a.triplets() {
            let (pi, pj) = (perm.old_to_new[i], perm.old_to_new[j]);
            band[idx(pi, pj)] += v;
            scale = scale.max(v.modulus());
        }
        if scale == 0.0 {
            scale = 1.0;
        }
        let mut pivots = vec![0; n];
        let mut max_pivot = 0.0f64;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = band[idx(k, k)].modulus();
            for r in k + 1..=last_row {
                let m = band[idx(r, k)].modulus();
                if m > best {
                    best = m;
                    p = r;
                }
            }
            if !best.is_finite() || best <= 1e-14 * scale {
                return Err(Error::Singular {
                    condition: f64::INFINITY,
                });
            }
            pivots[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for c in k..=last_col {
                    band.swap(idx(k, c), idx(p, c));
                }
            }
            let d = band[idx(k, k)];
            max_pivot = max_pivot.max(best);
            min_pivot = min_pivot.min(best);
            for r in k + 1..=last_row {
                let f = band[idx(r, k)] / d;
                band[idx(r, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for c in k + 1..=last_col {
                    let u = band[idx(k, c)];
                    band[idx(r, c)] -= f * u;
                }
            }
        }
        Ok(Self {
            perm,
            n,
            kl,
            width,
            band,
            pivots,
            max_pivot,
            min_pivot,
        })
    }

    pub fn pivot_ratio(&self) -> f64 {
        if self.n == 0 {
            1.0
        } else {
            self.max_pivot / self.min_pivot
        }
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let kl = self.kl;
        let idx = |i: usize, j: usize| i * self.width + (j + kl - i);
        let mut x: Vec<T> = (0..n).map(|i| b[self.perm.new_to_old[i]]).collect();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let xk = x[k];
            for r in k + 1..=(k + kl).min(n.saturating_sub(1)) {
                x[r] -= self.band[idx(r, k)] * xk;
            }
        }
        let ku = self.width - 2 * kl - 1;
        for k in (0..n).rev() {
            let mut s = x[k];
            for c in k + 1..=(k + kl + ku).min(n - 1) {
                s -= self.band[idx(k, c)] * x[c];
            }
            x[k] = s / self.band[idx(k, k)];
        }
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            out[self.perm.new_to_old[i]] = x[i];
        }
        out
    }
}
