//! Global stiffness and mass assembly plus volume integrals of nodal fields.

use rayon::prelude::*;

use super::element::{element_matrices, quadrature_deg4, shape, TriGeom};
use crate::geometry::Mesh;
use crate::linalg::SparseSymMatrix;

pub(crate) fn tri_geom(mesh: &Mesh, e: usize) -> TriGeom {
    let [a, b, c] = mesh.triangles()[e];
    let n = mesh.nodes();
    TriGeom::new([n[a], n[b], n[c]])
}

type Triplets = Vec<(usize, usize, f64)>;

fn assemble(mesh: &Mesh, want_k: bool, want_m: bool) -> (Triplets, Triplets) {
    let order = mesh.element_order();
    let per: Vec<(Triplets, Triplets)> = (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let g = tri_geom(mesh, e);
            let (k, m) = element_matrices(order, &g);
            let nodes = mesh.element_nodes(e);
            let n = nodes.len();
            let mut tk = Vec::with_capacity(if want_k { n * n } else { 0 });
            let mut tm = Vec::with_capacity(if want_m { n * n } else { 0 });
            for i in 0..n {
                for j in 0..n {
                    if want_k {
                        tk.push((nodes[i], nodes[j], k[n * i + j]));
                    }
                    if want_m {
                        tm.push((nodes[i], nodes[j], m[n * i + j]));
                    }
                }
            }
            (tk, tm)
        })
        .collect();
    let (mut tk, mut tm) = (Vec::new(), Vec::new());
    for (k, m) in per {
        tk.extend(k);
        tm.extend(m);
    }
    (tk, tm)
}

/// Stiffness matrix `∫ ∇φ_i·∇φ_j` over the whole mesh, no boundary conditions.
pub fn assemble_stiffness(mesh: &Mesh) -> SparseSymMatrix {
    let n = mesh.n_nodes();
    SparseSymMatrix::from_triplets(n, n, &assemble(mesh, true, false).0)
}

/// Mass matrix `∫ φ_i φ_j`.
pub fn assemble_mass(mesh: &Mesh) -> SparseSymMatrix {
    let n = mesh.n_nodes();
    SparseSymMatrix::from_triplets(n, n, &assemble(mesh, false, true).1)
}

/// Stiffness and mass in one pass over the elements.
pub fn assemble_stiffness_mass(mesh: &Mesh) -> (SparseSymMatrix, SparseSymMatrix) {
    let n = mesh.n_nodes();
    let (tk, tm) = assemble(mesh, true, true);
    (
        SparseSymMatrix::from_triplets(n, n, &tk),
        SparseSymMatrix::from_triplets(n, n, &tm),
    )
}

/// Nodal interpolant of `f`.
pub fn interpolate(mesh: &Mesh, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    mesh.nodes().iter().map(|p| f(p[0], p[1])).collect()
}

/// Pointwise data handed to [`integrate_field`] integrands.
#[derive(Debug, Clone, Copy)]
pub struct FieldPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub grad: [f64; 2],
}

/// `∫ g(x, y, u, ∇u)` over the mesh for a nodal field `u`, with the
/// degree-4 triangle rule (exact for squares of P2 fields).
pub fn integrate_field(mesh: &Mesh, field: &[f64], g: impl Fn(FieldPoint) -> f64 + Sync) -> f64 {
    assert_eq!(
        field.len(),
        mesh.n_nodes(),
        "field length must match node count"
    );
    let order = mesh.element_order();
    let parts: Vec<f64> = (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let geom = tri_geom(mesh, e);
            let nodes = mesh.element_nodes(e);
            let mut n = [0.0; 6];
            let mut dn = [[0.0; 2]; 6];
            let mut acc = 0.0;
            for (l, w) in quadrature_deg4() {
                shape(order, &geom, l, &mut n, &mut dn);
                let (mut value, mut grad) = (0.0, [0.0; 2]);
                for (k, &node) in nodes.iter().enumerate() {
                    value += n[k] * field[node];
                    grad[0] += dn[k][0] * field[node];
                    grad[1] += dn[k][1] * field[node];
                }
                let [x, y] = geom.point(l);
                acc += w * geom.area * g(FieldPoint { x, y, value, grad });
            }
            acc
        })
        .collect();
    parts.iter().sum()
}

/// Evaluates a nodal field at `p`, or `None` if `p` is outside the mesh.
pub fn evaluate_at(mesh: &Mesh, field: &[f64], p: [f64; 2]) -> Option<f64> {
    let order = mesh.element_order();
    let tol = 1e-12;
    (0..mesh.n_elements()).find_map(|e| {
        let g = tri_geom(mesh, e);
        let v0 = g.verts[0];
        let d = [p[0] - v0[0], p[1] - v0[1]];
        let l1 = g.grads[1][0] * d[0] + g.grads[1][1] * d[1];
        let l2 = g.grads[2][0] * d[0] + g.grads[2][1] * d[1];
        let l = [1.0 - l1 - l2, l1, l2];
        if l.iter().any(|&x| x < -tol) {
            return None;
        }
        let mut n = [0.0; 6];
        let mut dn = [[0.0; 2]; 6];
        shape(order, &g, l, &mut n, &mut dn);
        Some(
            mesh.element_nodes(e)
                .iter()
                .enumerate()
                .map(|(k, &i)| n[k] * field[i])
                .sum(),
        )
    })
}
