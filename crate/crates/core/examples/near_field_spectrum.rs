//! Trapped modes of the semi-infinite half-strip below the continuum `π²`,
//! kept only when they survive a doubling of the truncation length.

use thinstrip::geometry::GradingSpec;
use thinstrip::scattering::{near_field_spectrum_l_stable, NearFieldParams};

fn main() -> thinstrip::Result<()> {
    let params = NearFieldParams {
        truncation_l: 20.0,
        grading: GradingSpec::default().with_far_aspect(4.0),
        ..Default::default()
    };
    for alpha in [0.2, 0.5, 0.8, 1.1, 1.3, 1.35] {
        let s = near_field_spectrum_l_stable(alpha, &params, 3, 1e-5)?;
        let shown: Vec<String> =
            s.mu.iter()
                .map(|m| format!("{:.6}", m / (std::f64::consts::PI.powi(2))))
                .collect();
        println!(
            "alpha={alpha:.2} N={} mu/pi^2=[{}]",
            s.n_circ,
            shown.join(", ")
        );
    }
    Ok(())
}
