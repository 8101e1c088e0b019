//! Dense reference eigensolver used to cross-check the sparse path on small
//! problems.

use nalgebra::{DMatrix, SymmetricEigen};

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

pub fn to_dense(a: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplets() {
        d[(i, j)] += v;
    }
    d
}

/// All eigenvalues of `K u = λ M u` (ascending) via Cholesky reduction.
pub fn dense_generalized_eigenvalues(k: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (vals, _) = dense_generalized_eigen(k, m)?;
    Ok(vals)
}

/// Eigenpairs of `K u = λ M u`, ascending, with `M`-orthonormal vectors.
pub fn dense_generalized_eigen(
    k: &DMatrix<f64>,
    m: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = k.nrows();
    if k.ncols() != n || m.shape() != (n, n) {
        return Err(Error::DimensionMismatch(
            "K and M must be square and equal size".into(),
        ));
    }
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidArgument("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let mut c = &linv * k * linv.transpose();
    c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    let back = linv.transpose();
    for (col, &i) in idx.iter().enumerate() {
        let v = &back * eig.eigenvectors.column(i);
        vecs.set_column(col, &v);
    }
    Ok((vals, vecs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pencil() {
        let k = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 1.0, 9.0]));
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 1.0, 3.0]));
        let v = dense_generalized_eigenvalues(&k, &m).unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[0] - 1.0).abs() < 1e-14);
        assert!((v[1] - 2.0).abs() < 1e-14);
        assert!((v[2] - 3.0).abs() < 1e-14);
    }
}
