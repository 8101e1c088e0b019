//! Assembles the Neumann Laplacian on a small trapezoid and checks the sparse
//! shift-invert solver against the dense oracle and the Sylvester count.

use thinstrip::eigen::{count_eigenvalues_below, dense_spectrum, solve_gevp_smallest};
use thinstrip::fem::{apply_dirichlet, assemble_stiffness_mass};
use thinstrip::geometry::{build_trapezoid_mesh, EdgeTag, GradingSpec, TrapezoidGeom};

fn main() -> thinstrip::Result<()> {
    let geom = TrapezoidGeom::new(0.2, 0.6)?;
    let mesh = build_trapezoid_mesh(&geom, 0.04, &GradingSpec::default())?;
    let (k, m) = assemble_stiffness_mass(&mesh);
    let (k, _) = apply_dirichlet(&k, &mesh, &[EdgeTag::DirichletWall])?;
    let (m, _) = apply_dirichlet(&m, &mesh, &[EdgeTag::DirichletWall])?;

    let dense = dense_spectrum(&k, &m)?;
    let sparse = solve_gevp_smallest(&k, &m, 6, 0.0)?;
    println!("{} dofs", dense.len());
    for (i, (d, s)) in dense.iter().zip(&sparse.eigenvalues).enumerate() {
        println!(
            "  {}: dense {d:.10} sparse {s:.10} diff {:.1e}",
            i + 1,
            (d - s).abs()
        );
    }
    let sigma = 0.5 * (dense[3] + dense[4]);
    println!(
        "eigenvalues below {sigma:.3}: {} (expected 4)",
        count_eigenvalues_below(&k, &m, sigma)?
    );
    Ok(())
}
