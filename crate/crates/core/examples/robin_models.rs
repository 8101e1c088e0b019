//! Matches the trapezoid spectrum near `α*₁` and near `0` against the 1D
//! Robin models with angles `α*₁ + ετ` and `ετ`.

use thinstrip::harness::{
    matched_near_field, matched_threshold_angle, verify_model_k, verify_model_zero, TrapezoidParams,
};
use thinstrip::scattering::{constant_b, constant_d};

fn main() -> thinstrip::Result<()> {
    let p = TrapezoidParams::default();
    let eps = [0.1, 0.05, 0.025];
    let alpha_star = matched_threshold_angle(1.319, &p)?;
    let b = constant_b(alpha_star, &matched_near_field(&p))?.b;
    let d = constant_d(8.0, 0.025)?.d;
    let k = verify_model_k(alpha_star, b, &[-0.1, 0.1], &eps, &p)?;
    let z = verify_model_zero(d, &[-3.0, 3.0], &eps, &p)?;
    for c in [&k, &z] {
        println!("{:?}", c.regime);
        for r in &c.records {
            println!(
                "  tau={:+} eps={} computed {:+.3} predicted {:+.3}",
                r.tau.unwrap_or(0.0),
                r.eps,
                r.computed,
                r.predicted
            );
        }
        println!("  rates {:?}", c.fitted_rates);
    }
    Ok(())
}
