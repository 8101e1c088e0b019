//! Generalized symmetric eigenproblems, definiteness audits and the
//! complex-symmetric Robin solve.

mod gevp;

use num_complex::Complex64;

pub use gevp::{
    count_eigenvalues_below, dense_spectrum, solve_gevp_smallest, solve_gevp_with, EigenMethod,
    EigenResult, GevpOptions, DENSE_ORACLE_LIMIT,
};

use crate::error::{Error, Result};
use crate::linalg::{ProfileLdlt, SparseComplexMatrix, SparseSolver, SparseSymMatrix, REFINE_TOL};

/// Solution of a complex-symmetric system with solver diagnostics.
#[derive(Debug, Clone)]
pub struct ComplexSolve {
    pub solution: Vec<Complex64>,
    pub relative_residual: f64,
    pub condition_estimate: f64,
    pub used_fallback: bool,
}

/// Solves `A x = b` for complex-symmetric `A` to relative residual 1e-10,
/// or to the rounding floor of `A x` when that is larger.
pub fn solve_complex_symmetric(a: &SparseComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    Ok(solve_complex_symmetric_report(a, b)?.solution)
}

pub fn solve_complex_symmetric_report(
    a: &SparseComplexMatrix,
    b: &[Complex64],
) -> Result<ComplexSolve> {
    if a.nrows() != a.ncols() || b.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{}, right-hand side {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let solver = SparseSolver::new(a)?;
    let (solution, relative_residual) = solver.solve_with_residual(b);
    let condition_estimate = solver.pivot_ratio();
    if !(relative_residual < REFINE_TOL.max(solver.rounding_floor(&solution, b))) {
        return Err(Error::Singular {
            condition: condition_estimate,
        });
    }
    Ok(ComplexSolve {
        solution,
        relative_residual,
        condition_estimate,
        used_fallback: solver.used_fallback(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Sign of the smallest eigenvalue and the number of negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Definiteness {
    pub sign: Sign,
    pub negative_count: usize,
}

/// Sign of the smallest eigenvalue of a symmetric matrix, from the inertia
/// of its `LDLᵀ` factorization.
pub fn smallest_eigenvalue_sign(k: &SparseSymMatrix) -> Result<Definiteness> {
    if k.nrows() != k.ncols() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    if k.symmetry_defect() > 0.0 {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    if let Ok(f) = ProfileLdlt::factor(k) {
        let negative_count = f.negative_count();
        let sign = if negative_count > 0 {
            Sign::Negative
        } else {
            Sign::Positive
        };
        return Ok(Definiteness {
            sign,
            negative_count,
        });
    }
    // zero pivot: bracket the spectrum near 0 with two nearby shifts
    let scale = k
        .diagonal()
        .iter()
        .fold(0.0f64, |a, d| a.max(d.abs()))
        .max(f64::MIN_POSITIVE);
    let eye = SparseSymMatrix::identity(k.nrows());
    let count = |delta: f64| -> Result<usize> {
        Ok(ProfileLdlt::factor(&k.linear_combination(1.0, &eye, delta))?.negative_count())
    };
    let delta = 1e-10 * scale;
    let (plus, minus) = (count(delta)?, count(-delta)?);
    let sign = if plus > 0 {
        Sign::Negative
    } else if minus > 0 {
        Sign::Zero
    } else {
        Sign::Positive
    };
    Ok(Definiteness {
        sign,
        negative_count: plus,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::fem::{apply_dirichlet, assemble_stiffness_mass};
    use crate::geometry::*;
    use crate::linalg::CsrMatrix;

    fn pencil(
        eps: f64,
        alpha: f64,
        h: f64,
        order: ElementOrder,
    ) -> (SparseSymMatrix, SparseSymMatrix) {
        let g = TrapezoidGeom::new(eps, alpha).unwrap();
        let m = build_trapezoid_mesh(&g, h, &GradingSpec::default())
            .unwrap()
            .with_order(order);
        let (k, mass) = assemble_stiffness_mass(&m);
        let (k, _) = apply_dirichlet(&k, &m, &[EdgeTag::DirichletWall]).unwrap();
        let (mass, _) = apply_dirichlet(&mass, &m, &[EdgeTag::DirichletWall]).unwrap();
        (k, mass)
    }

    #[test]
    fn one_by_one() {
        let k = CsrMatrix::from_triplets(1, 1, &[(0, 0, 2.0)]);
        let m = CsrMatrix::identity(1);
        let r = solve_gevp_smallest(&k, &m, 1, 0.0).unwrap();
        assert_eq!(r.eigenvalues, vec![2.0]);
    }

    #[test]
    fn sparse_matches_dense_oracle() {
        let (k, m) = pencil(0.1, 0.6, 0.025, ElementOrder::P2);
        assert!(
            k.nrows() > 400 && k.nrows() < DENSE_ORACLE_LIMIT,
            "{}",
            k.nrows()
        );
        let all = dense_spectrum(&k, &m).unwrap();
        let r = solve_gevp_smallest(&k, &m, 5, 0.0).unwrap();
        assert_eq!(r.method, EigenMethod::ShiftInvert);
        for (a, b) in r.eigenvalues.iter().zip(&all) {
            assert!((a - b).abs() < 1e-9 * b, "{a} vs {b}");
        }
        for (i, u) in r.eigenvectors.iter().enumerate() {
            for (j, v) in r.eigenvectors.iter().enumerate() {
                let g = m.bilinear(u, v);
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8);
            }
        }
        assert!(r.residual_norms.iter().all(|&x| x < 1e-8));
        // interior window
        let shift = 0.5 * (all[6] + all[7]);
        let w = solve_gevp_smallest(&k, &m, 3, shift).unwrap();
        for (a, b) in w.eigenvalues.iter().zip(&all[7..]) {
            assert!((a - b).abs() < 1e-9 * b, "{a} vs {b}");
        }
        assert_eq!(count_eigenvalues_below(&k, &m, shift).unwrap(), 7);
    }

    #[test]
    fn rectangle_spectrum_converges() {
        let eps = 0.05;
        let (k, m) = pencil(eps, 0.0, eps / 20.0, ElementOrder::P2);
        let r = solve_gevp_smallest(&k, &m, 3, 0.0).unwrap();
        for (p, lam) in r.eigenvalues.iter().enumerate() {
            let exact = PI * PI * (1.0 / (eps * eps) + (p as f64 + 0.5).powi(2));
            assert!(
                lam > &exact && (lam - exact) / exact < 1e-6,
                "{lam} vs {exact}"
            );
        }
        assert!(r.eigenvalues[1] - r.eigenvalues[0] > 0.0);
    }

    #[test]
    fn clusters_are_returned_whole() {
        // two decoupled copies of the same 1D Laplacian: every eigenvalue double
        let n = 300;
        let mut t = Vec::new();
        for c in 0..2 {
            for i in 0..n {
                let o = c * n;
                t.push((o + i, o + i, 2.0));
                if i + 1 < n {
                    t.push((o + i, o + i + 1, -1.0));
                    t.push((o + i + 1, o + i, -1.0));
                }
            }
        }
        let k = CsrMatrix::from_triplets(2 * n, 2 * n, &t);
        let m = CsrMatrix::identity(2 * n);
        let r = solve_gevp_smallest(&k, &m, 3, 0.0).unwrap();
        assert_eq!(r.eigenvalues.len(), 4);
        let l1 = 2.0 - 2.0 * (PI / (n as f64 + 1.0)).cos();
        assert!((r.eigenvalues[0] - l1).abs() < 1e-12 && (r.eigenvalues[1] - l1).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_errors() {
        let (k, m) = pencil(0.1, 0.3, 0.03, ElementOrder::P2);
        let a = solve_gevp_smallest(&k, &m, 2, 0.0).unwrap();
        let b = solve_gevp_smallest(&k, &m, 2, 0.0).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
        let small = CsrMatrix::identity(3);
        assert!(matches!(
            solve_gevp_smallest(&k, &small, 1, 0.0),
            Err(Error::DimensionMismatch(_))
        ));
        let opts = GevpOptions {
            max_iter: 1,
            tol: 1e-15,
            ..Default::default()
        };
        match solve_gevp_with(&k, &m, 2, 0.0, &opts) {
            Err(Error::NoConvergence { residuals, .. }) => assert!(!residuals.is_empty()),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn definiteness_audits() {
        let eps = 0.2;
        let g = TrapezoidGeom::new(eps, 0.0).unwrap();
        let mesh = build_trapezoid_mesh(&g, 0.05, &GradingSpec::uniform()).unwrap();
        let (k, mass) = assemble_stiffness_mass(&mesh);
        let all = [EdgeTag::DirichletWall, EdgeTag::FreeSide];
        let (kc, _) = apply_dirichlet(&k, &mesh, &all).unwrap();
        let (mc, _) = apply_dirichlet(&mass, &mesh, &all).unwrap();
        assert_eq!(smallest_eigenvalue_sign(&kc).unwrap().sign, Sign::Positive);
        let mu = PI * PI * (1.0 + 1.0 / (eps * eps));
        let shifted = kc.linear_combination(1.0, &mc, -mu * 1.01);
        assert_eq!(
            smallest_eigenvalue_sign(&shifted).unwrap().sign,
            Sign::Negative
        );
        let spec = dense_spectrum(&kc, &mc).unwrap();
        let mid = kc.linear_combination(1.0, &mc, -0.5 * (spec[0] + spec[1]));
        let d = smallest_eigenvalue_sign(&mid).unwrap();
        assert_eq!((d.sign, d.negative_count), (Sign::Negative, 1));
        let sing =
            CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]);
        assert_eq!(smallest_eigenvalue_sign(&sing).unwrap().sign, Sign::Zero);
    }

    #[test]
    fn complex_solves() {
        let n = 5;
        let b: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(i as f64, 1.0 - i as f64))
            .collect();
        let eye = SparseComplexMatrix::identity(n);
        assert_eq!(solve_complex_symmetric(&eye, &b).unwrap(), b);
        let l = 8.0;
        let d = SparseComplexMatrix::from_diagonal(&vec![Complex64::new(l, -1.0); n]);
        let x = solve_complex_symmetric(&d, &b).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi / Complex64::new(l, -1.0)).norm() < 1e-15);
        }
        let z = Complex64::new(0.0, 0.0);
        let sing = SparseComplexMatrix::from_triplets(
            2,
            2,
            &[(0, 0, Complex64::new(1.0, 0.0)), (1, 1, z)],
        );
        assert!(matches!(
            solve_complex_symmetric(&sing, &b[..2]),
            Err(Error::Singular { .. }) | Err(Error::Breakdown { .. })
        ));
    }
}
