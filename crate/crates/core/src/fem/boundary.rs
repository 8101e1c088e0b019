//! Boundary terms: edge mass and loads, the complex Robin truncation, and
//! traces of nodal fields along the free side Γ.

use num_complex::Complex64;

use super::element::{edge_shape, edge_shape_dt, gauss_unit};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryEdge, EdgeTag, Mesh};
use crate::linalg::{Scalar, SparseComplexMatrix, SparseSymMatrix};

/// Linear form given by node coefficients, supported on one tagged segment.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunctional<T> {
    pub tag: EdgeTag,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> BoundaryFunctional<T> {
    /// `Σ c_i v_i` for a full-length nodal vector.
    pub fn apply(&self, v: &[T]) -> T {
        self.coeffs.iter().zip(v).map(|(&c, &x)| c * x).sum()
    }
}

fn edge_nodes(e: &BoundaryEdge) -> ([usize; 3], usize) {
    match e.mid {
        Some(m) => ([e.nodes[0], e.nodes[1], m], 3),
        None => ([e.nodes[0], e.nodes[1], usize::MAX], 2),
    }
}

fn tagged(mesh: &Mesh, tag: EdgeTag) -> Result<Vec<&BoundaryEdge>> {
    let edges: Vec<_> = mesh.edges_with_tag(tag).collect();
    if edges.is_empty() {
        return Err(Error::InvalidMesh(format!("mesh has no {tag} edges")));
    }
    Ok(edges)
}

/// Edge shape values at parameter `t` for an edge with `n` nodes.
fn edge_basis(t: f64, n: usize) -> [f64; 3] {
    if n == 3 {
        edge_shape(t)
    } else {
        [1.0 - t, t, 0.0]
    }
}

/// `∫ φ_i φ_j` over the edges carrying `tag`.
pub fn assemble_boundary_mass(mesh: &Mesh, tag: EdgeTag) -> Result<SparseSymMatrix> {
    let rule = gauss_unit(3);
    let mut trip = Vec::new();
    for e in tagged(mesh, tag)? {
        let (nodes, n) = edge_nodes(e);
        let len = edge_length(mesh, e);
        for i in 0..n {
            for j in 0..n {
                let v: f64 = rule
                    .iter()
                    .map(|&(t, w)| {
                        let b = edge_basis(t, n);
                        w * b[i] * b[j]
                    })
                    .sum();
                trip.push((nodes[i], nodes[j], len * v));
            }
        }
    }
    let nn = mesh.n_nodes();
    Ok(SparseSymMatrix::from_triplets(nn, nn, &trip))
}

/// `∫ g φ_i` over the edges carrying `tag`.
pub fn assemble_boundary_load(
    mesh: &Mesh,
    tag: EdgeTag,
    g: impl Fn(f64, f64) -> f64,
) -> Result<Vec<f64>> {
    let rule = gauss_unit(5);
    let mut load = vec![0.0; mesh.n_nodes()];
    let pts = mesh.nodes();
    for e in tagged(mesh, tag)? {
        let (nodes, n) = edge_nodes(e);
        let (a, b) = (pts[e.nodes[0]], pts[e.nodes[1]]);
        let len = edge_length(mesh, e);
        for &(t, w) in &rule {
            let gv = g(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]));
            let basis = edge_basis(t, n);
            for k in 0..n {
                load[nodes[k]] += len * w * gv * basis[k];
            }
        }
    }
    Ok(load)
}

fn edge_length(mesh: &Mesh, e: &BoundaryEdge) -> f64 {
    let (a, b) = (mesh.nodes()[e.nodes[0]], mesh.nodes()[e.nodes[1]]);
    (b[0] - a[0]).hypot(b[1] - a[1])
}

/// Robin truncation at `X = L`: the boundary mass scaled by `−1/(L−i)` and
/// the load `−2i/(L²+1) ∫ w_in φ` with `w_in(L, Y) = (L+i) sin(πY)`.
pub fn assemble_robin_boundary(
    mesh: &Mesh,
    l: f64,
) -> Result<(SparseComplexMatrix, BoundaryFunctional<Complex64>)> {
    let tag = EdgeTag::ArtificialBoundary;
    let mass = assemble_boundary_mass(mesh, tag)?;
    let robin = mass.to_complex().scale(-Complex64::new(l, -1.0).inv());
    let sine = assemble_boundary_load(mesh, tag, |_, y| (std::f64::consts::PI * y).sin())?;
    let factor = Complex64::new(0.0, -2.0) * Complex64::new(l, 1.0) / (l * l + 1.0);
    let coeffs = sine.into_iter().map(|g| factor * g).collect();
    Ok((robin, BoundaryFunctional { tag, coeffs }))
}

/// Weight applied in [`gamma_weighted_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaWeight {
    One,
    ArcLength,
}

/// `∫ w v`, `∫ w v²` and `∫ w (∂_s v)²` along Γ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GammaIntegrals {
    pub value: f64,
    pub value_sq: f64,
    pub tangential_sq: f64,
}

#[derive(Debug, Clone, Copy)]
struct TraceSegment {
    s0: f64,
    s1: f64,
    /// values at s0, s1 and the midpoint
    v: [f64; 3],
}

/// Trace of a nodal field on Γ parametrized by arc length from the tip.
#[derive(Debug, Clone)]
pub struct GammaTrace {
    segs: Vec<TraceSegment>,
}

impl GammaTrace {
    pub fn new(mesh: &Mesh, field: &[f64]) -> Result<Self> {
        if field.len() != mesh.n_nodes() {
            return Err(Error::DimensionMismatch(format!(
                "field has {} values, mesh has {} nodes",
                field.len(),
                mesh.n_nodes()
            )));
        }
        let tip = mesh.nodes()[mesh.corner_nodes()[0]];
        let arc = |i: usize| {
            let p = mesh.nodes()[i];
            (p[0] - tip[0]).hypot(p[1] - tip[1])
        };
        let mut segs: Vec<TraceSegment> = tagged(mesh, EdgeTag::FreeSide)?
            .into_iter()
            .map(|e| {
                let (a, b) = (e.nodes[0], e.nodes[1]);
                let mid = e.mid.map_or(0.5 * (field[a] + field[b]), |m| field[m]);
                let (sa, sb) = (arc(a), arc(b));
                if sa <= sb {
                    TraceSegment {
                        s0: sa,
                        s1: sb,
                        v: [field[a], field[b], mid],
                    }
                } else {
                    TraceSegment {
                        s0: sb,
                        s1: sa,
                        v: [field[b], field[a], mid],
                    }
                }
            })
            .collect();
        segs.sort_by(|a, b| a.s0.total_cmp(&b.s0));
        Ok(Self { segs })
    }

    pub fn length(&self) -> f64 {
        self.segs.last().map_or(0.0, |s| s.s1)
    }

    /// Arc-length positions of the trace nodes (segment ends).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.segs.iter().map(|s| s.s0).collect();
        b.push(self.length());
        b
    }

    fn locate(&self, s: f64) -> &TraceSegment {
        let k = self.segs.partition_point(|g| g.s1 < s);
        &self.segs[k.min(self.segs.len() - 1)]
    }

    /// Trace value and tangential derivative at arc length `s`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let g = self.locate(s);
        let h = g.s1 - g.s0;
        let t = ((s - g.s0) / h).clamp(0.0, 1.0);
        let (n, dn) = (edge_shape(t), edge_shape_dt(t));
        let v = (0..3).map(|k| n[k] * g.v[k]).sum();
        let dv = (0..3).map(|k| dn[k] * g.v[k]).sum::<f64>() / h;
        (v, dv)
    }

    /// Weighted integrals restricted to `s ∈ [lo, hi]`.
    pub fn integrals(&self, weight: GammaWeight, lo: f64, hi: f64) -> GammaIntegrals {
        let rule = gauss_unit(3);
        let mut out = GammaIntegrals::default();
        for g in &self.segs {
            let (a, b) = (g.s0.max(lo), g.s1.min(hi));
            if b <= a {
                continue;
            }
            let h = g.s1 - g.s0;
            for &(u, w) in &rule {
                let s = a + u * (b - a);
                let t = (s - g.s0) / h;
                let (n, dn) = (edge_shape(t), edge_shape_dt(t));
                let v: f64 = (0..3).map(|k| n[k] * g.v[k]).sum();
                let dv = (0..3).map(|k| dn[k] * g.v[k]).sum::<f64>() / h;
                let ww = w
                    * (b - a)
                    * match weight {
                        GammaWeight::One => 1.0,
                        GammaWeight::ArcLength => s,
                    };
                out.value += ww * v;
                out.value_sq += ww * v * v;
                out.tangential_sq += ww * dv * dv;
            }
        }
        out
    }
}

/// Weighted integrals of a nodal field along the whole of Γ.
pub fn gamma_weighted_integral(
    mesh: &Mesh,
    field: &[f64],
    weight: GammaWeight,
) -> Result<GammaIntegrals> {
    let trace = GammaTrace::new(mesh, field)?;
    Ok(trace.integrals(weight, 0.0, f64::INFINITY))
}
