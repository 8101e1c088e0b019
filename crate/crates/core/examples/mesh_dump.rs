//! Builds a trapezoid and a half-strip mesh, prints their statistics and
//! writes the trapezoid skeleton to stdout when `--dump` is given.

use thinstrip::geometry::{
    build_halfstrip_mesh, build_trapezoid_mesh, GradingSpec, HalfStripGeom, TrapezoidGeom,
};

fn main() -> thinstrip::Result<()> {
    let dump = std::env::args().any(|a| a == "--dump");
    for &alpha in &[0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.3, -1.3] {
        let geom = TrapezoidGeom::new(0.05, alpha)?;
        let mesh = build_trapezoid_mesh(&geom, 0.01, &GradingSpec::default())?;
        println!(
            "trapezoid eps=0.05 alpha={alpha:+.4}: {} triangles, {} nodes, quality {:.3}, h_min {:.2e}, area {:.15}",
            mesh.n_elements(),
            mesh.n_nodes(),
            mesh.min_quality(),
            mesh.h_min(),
            mesh.area()
        );
        if dump && alpha == 1.3 {
            mesh.write_text(std::io::stdout().lock())?;
        }
    }
    for &alpha in &[0.0, 0.3, 1.321] {
        let geom = HalfStripGeom::new(alpha, 8.0)?;
        let mesh = build_halfstrip_mesh(&geom, 0.05, &GradingSpec::default())?;
        println!(
            "half-strip alpha={alpha:.4}: {} triangles, {} nodes, quality {:.3}, h_min {:.2e}, area {:.15}",
            mesh.n_elements(),
            mesh.n_nodes(),
            mesh.min_quality(),
            mesh.h_min(),
            mesh.area()
        );
    }
    Ok(())
}
