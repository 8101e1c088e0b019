//! Compares computed eigenvalues with their leading asymptotics in the
//! generic, threshold and discrete regimes, and fits convergence rates.

use std::f64::consts::FRAC_PI_4;

use thinstrip::harness::{
    matched_threshold_angle, verify_discrete, verify_generic, verify_threshold,
    AsymptoticComparison, TrapezoidParams,
};

fn show(c: &AsymptoticComparison) {
    println!("{:?}: passed {}", c.regime, c.passed);
    for r in &c.records {
        println!(
            "  eps={:<6} index {} computed {:+.4e} predicted {:+.4e} residual {:.2e}",
            r.eps, r.index, r.computed, r.predicted, r.residual
        );
    }
    println!("  rates {:?} min ratio {:?}", c.fitted_rates, c.min_ratio);
}

fn main() -> thinstrip::Result<()> {
    let p = TrapezoidParams::default();
    let eps = [0.1, 0.05, 0.025];
    let alpha_star = matched_threshold_angle(1.319, &p)?;
    show(&verify_discrete(FRAC_PI_4, &eps, 1, &p)?);
    show(&verify_generic(FRAC_PI_4, &eps, 1, &[0.0, alpha_star], &p)?);
    show(&verify_threshold(alpha_star, &eps, 1, &p)?);
    Ok(())
}
