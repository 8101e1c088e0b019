//! Domains, structured graded meshes and refinement.

mod builder;
mod domain;
mod grading;
mod mesh;

pub use builder::{build_halfstrip_mesh, build_trapezoid_mesh, GradingSpec};
pub use domain::{corner_exponents, GammaBc, HalfStripGeom, TrapezoidGeom, DEFAULT_TRUNCATION};
pub use mesh::{BoundaryEdge, EdgeTag, ElementOrder, Mesh};

/// Uniform red refinement (each triangle split into four).
pub fn refine(mesh: &Mesh) -> Mesh {
    mesh.refine()
}
