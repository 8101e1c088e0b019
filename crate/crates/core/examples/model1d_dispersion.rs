//! Robin model on `(0, 1)`: `−γ'' = η γ`, `γ'(0) = −c γ(0)`, `γ(1) = 0`.
//! Sweeps `τ` for both model variants and compares roots of the dispersion
//! relation with a P1 finite-element solve.

use thinstrip::model1d::{dispersion_eigenvalues, fall_asymptote, fem1d_eigenvalues, RobinModel};

fn main() -> thinstrip::Result<()> {
    let (b, d) = (23.9, 0.726);
    println!("variant,tau,c,eta_1,eta_2,eta_1_fem,asymptote");
    for variant in ["k", "zero"] {
        for tau in [-2.0, -0.5, 0.0, 0.02, 0.1, 0.5, 2.0] {
            let m = match variant {
                "k" => RobinModel::threshold_k(tau, b)?,
                _ => RobinModel::zero_angle(tau, d)?,
            };
            let eta = dispersion_eigenvalues(&m, 2)?.etas;
            let fem = fem1d_eigenvalues(&m, 400, 1)?.etas;
            println!(
                "{variant},{tau},{:.4},{:.6},{:.6},{:.6},{:.3}",
                m.robin_coeff(),
                eta[0],
                eta[1],
                fem[0],
                fall_asymptote(&m)
            );
        }
    }
    Ok(())
}
