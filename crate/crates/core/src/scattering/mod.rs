//! Near-field half-strip: threshold scattering, discrete spectrum and the
//! constants of the Robin model problems.

mod constants;
mod field;
mod scan;
mod spectrum;

pub use constants::{
    bessel_j, constant_b, constant_d, d_series, gamma_energy, phase_derivative_check, rellich_b,
    u_norm_sq_series, BConstant, DConstant, ModelConstants, PhaseDerivative, IMAG_RATIO_TOL,
    THRESHOLD_S_TOL,
};
pub use field::{
    scattering_coefficient, solve_threshold_field, solve_threshold_field_on, NearFieldParams,
    ThresholdField,
};
pub use scan::{
    find_threshold_angles, refine_threshold_near, scan_phase, scan_phase_with, uniform_grid,
    ScanOptions, ScatteringSample, ThresholdAngle, ThresholdAngles, UNITARITY_TOL,
};
pub use spectrum::{
    near_field_discrete_spectrum, near_field_discrete_spectrum_with, near_field_spectrum_l_stable,
    NearFieldSpectrum, DISCRETE_MARGIN,
};

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;
    use crate::fem::{evaluate_at, interpolate};
    use crate::geometry::{GradingSpec, HalfStripGeom};

    fn params(h: f64) -> NearFieldParams {
        NearFieldParams {
            h,
            ..Default::default()
        }
    }

    #[test]
    fn straight_strip_reflects_totally() {
        let f = solve_threshold_field(0.0, &params(0.04)).unwrap();
        assert!((f.s + 1.0).norm() < 1e-4, "{}", f.s);
        let im: Vec<f64> = f.values.iter().map(|w| w.im).collect();
        let re: Vec<f64> = f.values.iter().map(|w| w.re).collect();
        let mid = evaluate_at(&f.mesh, &im, [4.0, 0.5]).unwrap();
        assert!((mid - 2.0).abs() < 1e-3, "{mid}");
        assert!(re.iter().all(|x| x.abs() < 1e-3));
        for (p, w) in f.mesh.nodes().iter().zip(&f.values) {
            assert!((w - Complex64::new(0.0, 2.0 * (PI * p[1]).sin())).norm() < 1e-3);
        }
    }

    #[test]
    fn unitary_and_insensitive_to_truncation() {
        // the L = 8 / L = 12 gap is dominated by the discrete transverse
        // eigenvalue mismatch, which falls like h⁴
        let p = params(0.025);
        let a = solve_threshold_field(1.0, &p).unwrap();
        let b = solve_threshold_field(
            1.0,
            &NearFieldParams {
                truncation_l: 12.0,
                ..p
            },
        )
        .unwrap();
        assert!(a.unitarity_error() < 1e-3);
        assert!((a.s - b.s).norm() < 1e-4, "{} {}", a.s, b.s);
        assert!(a.relative_residual < 1e-10);
    }

    #[test]
    fn incoming_trace_gives_zero_coefficient() {
        let geom = HalfStripGeom::new(0.4, 8.0).unwrap();
        let mesh =
            crate::geometry::build_halfstrip_mesh(&geom, 0.05, &GradingSpec::default()).unwrap();
        let w: Vec<Complex64> = interpolate(&mesh, |x, y| (PI * y).sin() * x)
            .iter()
            .zip(interpolate(&mesh, |_, y| (PI * y).sin()))
            .map(|(a, b)| Complex64::new(*a, b))
            .collect();
        let s = scattering_coefficient(&w, &geom, &mesh).unwrap();
        assert!(s.norm() < 1e-5, "{s}");
        assert!(scattering_coefficient(&w[1..], &geom, &mesh).is_err());
    }

    #[test]
    fn scan_rejects_bad_grids_and_starts_at_pi() {
        let p = params(0.08);
        assert!(scan_phase(&[], &p).is_err());
        assert!(scan_phase(&[0.2, 0.1], &p).is_err());
        assert!(scan_phase(&[0.0, 1.6], &p).is_err());
        let s = scan_phase(&[0.0], &p).unwrap();
        assert!((s[0].phase_unwrapped - PI).abs() < 1e-3);
        assert!(s[0].accepted);
    }

    #[test]
    fn first_threshold_angle_is_found_and_rotates_counter_clockwise() {
        let p = params(0.08);
        let grid = uniform_grid(0.0, 0.45 * PI, 50);
        let scan = scan_phase(&grid, &p).unwrap();
        assert!(scan.iter().all(|s| s.accepted));
        let jumps = scan
            .windows(2)
            .map(|w| (w[1].phase_unwrapped - w[0].phase_unwrapped).abs());
        assert!(jumps.fold(0.0, f64::max) < PI / 2.0);
        let th = find_threshold_angles(&scan, 1, &p, 1e-4).unwrap();
        assert!(th.complete);
        assert_eq!(th.angles[0].alpha, 0.0);
        let a1 = th.first_positive().unwrap();
        assert!((1.30..1.34).contains(&a1), "{a1}");
        let near = scan.iter().position(|s| s.alpha > a1).unwrap();
        assert!(scan[near].phase_unwrapped > scan[near - 1].phase_unwrapped);
        let again = refine_threshold_near(1.33, 0.02, &p, 1e-6).unwrap();
        assert!((again - a1).abs() < 1e-4, "{again} {a1}");
    }

    #[test]
    fn b_estimates_agree_and_are_quadratic() {
        let p = params(0.05);
        let b = constant_b(1.321, &p).unwrap();
        assert!(b.b > 0.0 && b.b_rellich > 0.0);
        assert!(b.relative_gap < 1e-2, "{b:?}");
        assert!(b.imag_ratio < IMAG_RATIO_TOL);
        let f = solve_threshold_field(b.alpha_star, &p).unwrap();
        let v: Vec<f64> = f.values.iter().map(|w| w.im / 2.0).collect();
        let v3: Vec<f64> = v.iter().map(|x| 3.0 * x).collect();
        let alpha = b.alpha_star;
        let (g1, g3) = (
            gamma_energy(&f.mesh, &v, alpha).unwrap().0,
            gamma_energy(&f.mesh, &v3, alpha).unwrap().0,
        );
        assert!((g3 - 9.0 * g1).abs() < 1e-9 * g3.abs());
        let (r1, r3) = (
            rellich_b(&f.mesh, &v, alpha),
            rellich_b(&f.mesh, &v3, alpha),
        );
        assert!((r3 - 9.0 * r1).abs() < 1e-9 * r3);
        assert!(constant_b(0.7, &p).is_err());
    }

    #[test]
    fn d_constant() {
        let d8 = constant_d(8.0, 0.05).unwrap();
        let d6 = constant_d(6.0, 0.05).unwrap();
        assert!(d8.d > 0.0 && d8.d >= d8.lower_bound);
        assert!((d8.d - d6.d).abs() < 1e-3 * d8.d);
        assert!((d8.d - d8.series).abs() < 5e-3 * d8.series);
        assert!(d8.oddness_defect < 1e-4);
        assert!(constant_d(3.0, 0.05).is_err());
    }

    #[test]
    fn discrete_spectrum() {
        let p = NearFieldParams {
            grading: GradingSpec::default().with_far_aspect(4.0),
            ..params(0.08)
        };
        assert!(near_field_discrete_spectrum(0.0, &p, 3)
            .unwrap()
            .mu
            .is_empty());
        let s = near_field_discrete_spectrum(0.47 * PI, &p, 3).unwrap();
        assert!(
            s.n_circ >= 2 && s.mu[0] > PI * PI / 4.0 && s.mu[0] < 0.5 * PI * PI,
            "{s:?}"
        );
        let mus: Vec<f64> = [0.6, 0.9, 1.2]
            .iter()
            .map(|&a| near_field_discrete_spectrum(a, &p, 1).unwrap().mu[0])
            .collect();
        assert!(mus.windows(2).all(|w| w[1] < w[0]));
        let weak = near_field_spectrum_l_stable(
            0.3,
            &NearFieldParams {
                truncation_l: 40.0,
                ..p
            },
            1,
            1e-5,
        )
        .unwrap();
        assert_eq!(weak.n_circ, 1);
        assert!(weak.mu[0] < PI * PI && weak.mu[0] > 0.99 * PI * PI);
        assert!(near_field_discrete_spectrum(0.3, &p, 1)
            .unwrap()
            .mu
            .is_empty());
    }
}
