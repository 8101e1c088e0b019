//! Skyline (variable-band) LDLᵀ factorization for symmetric and complex
//! symmetric sparse matrices, applied after a reverse Cuthill–McKee reordering.

use super::ordering::{reverse_cuthill_mckee, Permutation};
use super::scalar::{dot, Scalar};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// `P A Pᵀ = L D Lᵀ` with unit lower-triangular `L` stored by rows inside its
/// envelope. No pivoting is performed.
#[derive(Debug, Clone)]
pub struct ProfileLdlt<T> {
    perm: Permutation,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<T>,
    max_pivot: f64,
    min_pivot: f64,
}

/// Relative pivot size below which the factorization is declared broken.
const BREAKDOWN_TOL: f64 = 1e-13;

impl<T: Scalar> ProfileLdlt<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let (rp, ci) = a.pattern();
        let perm = reverse_cuthill_mckee(rp, ci);
        Self::factor_with(a, perm)
    }

    pub fn factor_with(a: &CsrMatrix<T>, perm: Permutation) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                n,
                a.ncols()
            )));
        }
        let mut first: Vec<usize> = (0..n).collect();
        for old_i in 0..n {
            let i = perm.old_to_new[old_i];
            for &old_j in a.row(old_i).0 {
                let j = perm.old_to_new[old_j];
                if j < i {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut data = vec![T::zero(); start[n]];
        let mut scale = 0.0f64;
        for old_i in 0..n {
            let i = perm.old_to_new[old_i];
            let (cols, vals) = a.row(old_i);
            for (&old_j, &v) in cols.iter().zip(vals) {
                let j = perm.old_to_new[old_j];
                if j <= i {
                    data[start[i] + (j - first[i])] = v;
                }
                if j == i {
                    scale = scale.max(v.modulus());
                }
            }
        }
        if scale == 0.0 {
            scale = 1.0;
        }

        let mut max_pivot = 0.0f64;
        let mut min_pivot = f64::INFINITY;
        for i in 0..n {
            let fi = first[i];
            let row_i = start[i];
            // u_ij = a_ij - Σ_k u_ik l_jk, k in [max(fi, fj), j)
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                if k0 < j {
                    let (head, tail) = data.split_at_mut(row_i);
                    let lj = &head[start[j] + (k0 - fj)..start[j] + (j - fj)];
                    let ui = &tail[(k0 - fi)..(j - fi)];
                    let s = dot(ui, lj);
                    tail[j - fi] -= s;
                }
            }
            // l_ij = u_ij / d_j; d_i = a_ii - Σ u_ij l_ij
            let mut d = data[row_i + (i - fi)];
            for j in fi..i {
                let dj = data[start[j] + (j - first[j])];
                let u = data[row_i + (j - fi)];
                let l = u / dj;
                data[row_i + (j - fi)] = l;
                d -= u * l;
            }
            let m = d.modulus();
            if !m.is_finite() || m <= BREAKDOWN_TOL * scale {
                return Err(Error::Breakdown { index: i, pivot: m });
            }
            max_pivot = max_pivot.max(m);
            min_pivot = min_pivot.min(m);
            data[row_i + (i - fi)] = d;
        }
        Ok(Self {
            perm,
            first,
            start,
            data,
            max_pivot,
            min_pivot,
        })
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Crude condition indicator `max |d| / min |d|`.
    pub fn pivot_ratio(&self) -> f64 {
        if self.dim() == 0 {
            1.0
        } else {
            self.max_pivot / self.min_pivot
        }
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.dim()).map(move |i| self.data[self.start[i] + (i - self.first[i])])
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = (0..n).map(|i| b[self.perm.new_to_old[i]]).collect();
        // L z = y
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i] + (i - fi)];
            let s = dot(row, &x[fi..i]);
            x[i] -= s;
        }
        for i in 0..n {
            let d = self.data[self.start[i] + (i - self.first[i])];
            x[i] = x[i] / d;
        }
        // Lᵀ x = w
        for i in (0..n).rev() {
            let fi = self.first[i];
            let xi = x[i];
            let row = &self.data[self.start[i]..self.start[i] + (i - fi)];
            for (k, &l) in row.iter().enumerate() {
                x[fi + k] -= l * xi;
            }
        }
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            out[self.perm.new_to_old[i]] = x[i];
        }
        out
    }
}

impl ProfileLdlt<f64> {
    /// Number of negative pivots, i.e. the number of negative eigenvalues of
    /// the factored matrix (Sylvester's law of inertia).
    pub fn negative_count(&self) -> usize {
        self.pivots().filter(|d| *d < 0.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tridiag(n: usize, diag: f64) -> CsrMatrix<f64> {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, diag));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, &t)
    }

    #[test]
    fn solves_spd_tridiagonal() {
        let a = tridiag(50, 2.5);
        let f = ProfileLdlt::factor(&a).unwrap();
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.matvec(&x_true);
        let x = f.solve(&b);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-12);
        }
        assert_eq!(f.negative_count(), 0);
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        // eigenvalues of tridiag(2,-1) are 2 - 2cos(kπ/(n+1))
        let n = 20;
        let a = tridiag(n, 2.0);
        let shift = 1.1;
        let shifted = a.linear_combination(1.0, &CsrMatrix::identity(n), -shift);
        let f = ProfileLdlt::factor(&shifted).unwrap();
        let expected = (1..=n)
            .filter(|&k| {
                2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos() < shift
            })
            .count();
        assert_eq!(f.negative_count(), expected);
    }

    #[test]
    fn complex_symmetric_diagonal() {
        let l = 8.0;
        let d = Complex64::new(l, -1.0);
        let a = CsrMatrix::from_diagonal(&[d; 4]);
        let b: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let x = ProfileLdlt::factor(&a).unwrap().solve(&b);
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi / d).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_pivot_is_breakdown() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 1.0)]);
        assert!(matches!(
            ProfileLdlt::factor(&a),
            Err(Error::Breakdown { .. })
        ));
    }
}
