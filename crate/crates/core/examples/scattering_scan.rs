//! Scans the threshold scattering coefficient `S(α)` of the half-strip,
//! prints the unwrapped phase and locates the threshold angles.

use std::f64::consts::PI;

use thinstrip::scattering::{find_threshold_angles, scan_phase, uniform_grid, NearFieldParams};

fn main() -> thinstrip::Result<()> {
    let params = NearFieldParams::default();
    let scan = scan_phase(&uniform_grid(0.0, 0.45 * PI, 50), &params)?;
    println!("alpha,re_s,im_s,phase,abs_s_error");
    for s in &scan {
        println!(
            "{:.6},{:+.8},{:+.8},{:.6},{:.1e}",
            s.alpha, s.s_re, s.s_im, s.phase_unwrapped, s.abs_s_error
        );
    }
    let angles = find_threshold_angles(&scan, 2, &params, 1e-9)?;
    for a in &angles.angles {
        println!("threshold angle {:.7} (branch {})", a.alpha, a.branch);
    }
    if !angles.complete {
        println!(
            "fewer than {} positive angles below 0.45 pi",
            angles.requested
        );
    }
    Ok(())
}
