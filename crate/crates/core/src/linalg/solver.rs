use super::banded::BandedLu;
use super::profile::ProfileLdlt;
use super::scalar::{norm2, Scalar};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Factor<T> {
    Ldlt(ProfileLdlt<T>),
    Lu(BandedLu<T>),
}

/// Direct sparse solver: profile LDLᵀ, falling back to pivoted banded LU on
/// breakdown, with iterative refinement on every solve.
#[derive(Debug, Clone)]
pub struct SparseSolver<T> {
    a: CsrMatrix<T>,
    factor: Factor<T>,
}

/// Target relative residual for iterative refinement.
pub const REFINE_TOL: f64 = 1e-10;
const REFINE_STEPS: usize = 4;
/// Pivot ratio above which a system is treated as singular.
pub const MAX_PIVOT_RATIO: f64 = 1e14;

impl<T: Scalar> SparseSolver<T> {
    pub fn new(a: &CsrMatrix<T>) -> Result<Self> {
        let factor = match ProfileLdlt::factor(a) {
            Ok(f) => Factor::Ldlt(f),
            Err(Error::Breakdown { .. }) => Factor::Lu(BandedLu::factor(a)?),
            Err(e) => return Err(e),
        };
        let s = Self {
            a: a.clone(),
            factor,
        };
        let ratio = s.pivot_ratio();
        if !(ratio < MAX_PIVOT_RATIO) {
            return Err(Error::Singular { condition: ratio });
        }
        Ok(s)
    }

    pub fn used_fallback(&self) -> bool {
        matches!(self.factor, Factor::Lu(_))
    }

    /// Ratio of largest to smallest pivot modulus, a cheap condition estimate.
    pub fn pivot_ratio(&self) -> f64 {
        match &self.factor {
            Factor::Ldlt(f) => f.pivot_ratio(),
            Factor::Lu(f) => f.pivot_ratio(),
        }
    }

    fn raw_solve(&self, b: &[T]) -> Vec<T> {
        match &self.factor {
            Factor::Ldlt(f) => f.solve(b),
            Factor::Lu(f) => f.solve(b),
        }
    }

    /// Solves `A x = b`; returns the solution and its relative residual
    /// `‖b − A x‖ / ‖b‖`.
    pub fn solve_with_residual(&self, b: &[T]) -> (Vec<T>, f64) {
        let bn = norm2(b);
        let mut x = self.raw_solve(b);
        if bn == 0.0 {
            return (x, 0.0);
        }
        let mut best = (x.clone(), f64::INFINITY);
        for step in 0..=REFINE_STEPS {
            let ax = self.a.matvec(&x);
            let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
            let rel = norm2(&r) / bn;
            if rel < best.1 {
                best = (x.clone(), rel);
            }
            if rel < REFINE_TOL * 1e-2 || step == REFINE_STEPS {
                break;
            }
            let dx = self.raw_solve(&r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += *di;
            }
        }
        best
    }

    /// Relative residual that rounding alone can produce for `x`:
    /// `64 ε ‖ |A| |x| ‖ / ‖b‖`.
    pub fn rounding_floor(&self, x: &[T], b: &[T]) -> f64 {
        let abs_ax: Vec<f64> = (0..self.a.nrows())
            .map(|i| {
                let (cols, vals) = self.a.row(i);
                cols.iter()
                    .zip(vals)
                    .map(|(&j, v)| v.modulus() * x[j].modulus())
                    .sum()
            })
            .collect();
        64.0 * f64::EPSILON * norm2(&abs_ax) / norm2(b)
    }

    /// Solves `A x = b`, failing unless the relative residual reaches
    /// [`REFINE_TOL`] or the rounding floor of the product `A x`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let (x, rel) = self.solve_with_residual(b);
        if rel.is_finite() && rel < REFINE_TOL.max(self.rounding_floor(&x, b)) {
            Ok(x)
        } else {
            Err(Error::Singular {
                condition: self.pivot_ratio(),
            })
        }
    }
}

impl SparseSolver<f64> {
    /// Negative eigenvalue count of the factored matrix, available only when
    /// the symmetric factorization succeeded.
    pub fn inertia(&self) -> Option<usize> {
        match &self.factor {
            Factor::Ldlt(f) => Some(f.negative_count()),
            Factor::Lu(_) => None,
        }
    }
}
