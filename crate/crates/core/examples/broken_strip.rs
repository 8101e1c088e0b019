//! The symmetric broken strip splits into Neumann (symmetric) and Dirichlet
//! (antisymmetric) trapezoid problems; their merged spectrum is printed with
//! parity labels.

use thinstrip::harness::{broken_strip_spectrum, exact_alpha0_broken, TrapezoidParams};

fn main() -> thinstrip::Result<()> {
    let eps = 0.05;
    let params = TrapezoidParams::default();
    let exact = exact_alpha0_broken(eps, 6);
    println!("alpha = 0");
    for (got, want) in broken_strip_spectrum(eps, 0.0, 6, &params)?
        .iter()
        .zip(&exact)
    {
        println!(
            "  {:?} {:.4} (exact {:.4})",
            got.parity, got.normalized, want.normalized
        );
    }
    for alpha in [0.6, 1.25, 1.4] {
        println!("alpha = {alpha}");
        for l in broken_strip_spectrum(eps, alpha, 4, &params)? {
            println!("  {:?} {:.4}", l.parity, l.normalized);
        }
    }
    Ok(())
}
