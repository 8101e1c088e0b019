//! The two model constants: `B` at the first threshold angle, checked
//! against the Rellich identity, and `D` at the zero angle with its lower
//! bound. Also reports the phase slope at `α*₁`.

use thinstrip::scattering::{
    constant_b, constant_d, phase_derivative_check, refine_threshold_near, NearFieldParams,
};

fn main() -> thinstrip::Result<()> {
    let params = NearFieldParams::default();
    let alpha_star = refine_threshold_near(1.32, 0.03, &params, 1e-10)?;
    println!("alpha*_1 = {alpha_star:.8}");

    let b = constant_b(alpha_star, &params)?;
    println!(
        "B = {:.6}  Rellich {:.6}  trace-only {:.6}  gap {:.2e}",
        b.b, b.b_rellich, b.b_trace_only, b.relative_gap
    );

    let ph = phase_derivative_check(alpha_star, &params)?;
    println!(
        "d(arg S)/d(alpha): finite difference {:.4}, boundary integral {:.4}, counter-clockwise {}",
        ph.finite_difference, ph.analytic, ph.counter_clockwise
    );

    let d = constant_d(8.0, 0.025)?;
    println!(
        "D = {:.6}  series {:.6}  lower bound {:.6}  oddness defect {:.1e}",
        d.d, d.series, d.lower_bound, d.oddness_defect
    );
    Ok(())
}
