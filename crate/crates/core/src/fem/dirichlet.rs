//! Dirichlet conditions by elimination of constrained nodes.

use crate::error::{Error, Result};
use crate::geometry::{EdgeTag, Mesh};
use crate::linalg::{CsrMatrix, Scalar};

const CONSTRAINED: usize = usize::MAX;

/// Map between full node numbering and the reduced (free) numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    free: Vec<usize>,
    index: Vec<usize>,
}

impl DofMap {
    /// Constrains every node lying on an edge whose tag is in `tags`.
    pub fn new(mesh: &Mesh, tags: &[EdgeTag]) -> Result<Self> {
        if tags.is_empty() {
            return Err(Error::InvalidArgument("Dirichlet tag set is empty".into()));
        }
        let mut index = vec![0usize; mesh.n_nodes()];
        for i in mesh.nodes_on(tags) {
            index[i] = CONSTRAINED;
        }
        let mut free = Vec::new();
        for (i, slot) in index.iter_mut().enumerate() {
            if *slot != CONSTRAINED {
                *slot = free.len();
                free.push(i);
            }
        }
        if free.is_empty() {
            return Err(Error::InvalidArgument(
                "Dirichlet tags constrain every node".into(),
            ));
        }
        Ok(Self { free, index })
    }

    pub fn n_full(&self) -> usize {
        self.index.len()
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    /// Full indices of the free nodes, ascending.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Reduced index of full node `i`, if free.
    pub fn reduced_index(&self, i: usize) -> Option<usize> {
        let r = self.index[i];
        (r != CONSTRAINED).then_some(r)
    }

    pub fn restrict<T: Scalar>(&self, full: &[T]) -> Vec<T> {
        self.free.iter().map(|&i| full[i]).collect()
    }

    /// Extends a reduced vector by zero on constrained nodes.
    pub fn extend<T: Scalar>(&self, reduced: &[T]) -> Vec<T> {
        let mut full = vec![T::zero(); self.n_full()];
        for (&i, &v) in self.free.iter().zip(reduced) {
            full[i] = v;
        }
        full
    }
}

/// Removes rows and columns of nodes on the `tags` edges.
pub fn apply_dirichlet<T: Scalar>(
    matrix: &CsrMatrix<T>,
    mesh: &Mesh,
    tags: &[EdgeTag],
) -> Result<(CsrMatrix<T>, DofMap)> {
    if matrix.nrows() != mesh.n_nodes() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, mesh has {} nodes",
            matrix.nrows(),
            mesh.n_nodes()
        )));
    }
    let map = DofMap::new(mesh, tags)?;
    Ok((matrix.principal_submatrix(map.free()), map))
}
