//! Cross-scale verification on the thin trapezoid.

mod broken;
mod dive;
mod manifest;
mod spectrum;
mod verify;

pub use broken::{broken_strip_spectrum, exact_alpha0_broken, LabeledEigenvalue, Parity};
pub use dive::{dive_sweep, track_branches, DiveRow, DiveTable};
pub use manifest::{sha256_hex, Manifest, OutputDigest};
pub use spectrum::{
    exact_alpha0_spectrum, mass_fraction_below, solve_trapezoid, transverse_threshold,
    trapezoid_spectrum, TrapezoidParams, TrapezoidSolution, TrapezoidSpectrum,
};
pub use verify::{
    compare_falls, fit_rate, localization, matched_near_field, matched_threshold_angle,
    verify_discrete, verify_generic, verify_model_k, verify_model_zero, verify_threshold,
    AsymptoticComparison, ComparisonRecord, FallComparison, Regime, DEFAULT_EPS_LIST,
    DISCRETE_TRUNCATION, ROUNDING_FLOOR, SUPER_ALGEBRAIC_RATIO, THRESHOLD_EXCLUSION,
};

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{ElementOrder, GammaBc};

    #[test]
    fn alpha0_formula() {
        assert!((exact_alpha0_spectrum(1.0, 1)[0] - 1.25 * PI * PI).abs() < 1e-12);
        let s = exact_alpha0_spectrum(0.05, 4);
        assert!((s[0] / (PI * PI) - 400.25).abs() < 1e-9);
        for p in 0..3 {
            assert!((s[p + 1] - s[p] - (2 * p + 2) as f64 * PI * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn transverse_threshold_converges_from_above() {
        let e1 = transverse_threshold(12, ElementOrder::P1).unwrap() - PI * PI;
        let e2 = transverse_threshold(12, ElementOrder::P2).unwrap() - PI * PI;
        let e2f = transverse_threshold(24, ElementOrder::P2).unwrap() - PI * PI;
        assert!(e1 > 0.0 && e2 > 0.0 && e2 < e1);
        assert!((e2 / e2f - 16.0).abs() < 1.0, "P2 rate {}", e2 / e2f);
        assert!(transverse_threshold(0, ElementOrder::P2).is_err());
    }

    #[test]
    fn trapezoid_alpha0_matches_fourier() {
        let p = TrapezoidParams::default();
        let s = trapezoid_spectrum(0.1, 0.0, GammaBc::Neumann, 3, &p).unwrap();
        let exact = exact_alpha0_spectrum(0.1, 3);
        for (n, e) in s.normalized().iter().zip(&exact) {
            let want = e - PI * PI / 0.01;
            assert!((n - want).abs() < 1e-3 * want, "{n} vs {want}");
        }
        assert_eq!(s.below_threshold, 0);
    }

    #[test]
    fn broken_alpha0_union() {
        let p = TrapezoidParams::default();
        let got = broken_strip_spectrum(0.1, 0.0, 4, &p).unwrap();
        let want = exact_alpha0_broken(0.1, 4);
        assert_eq!(
            want.iter().map(|l| l.parity).collect::<Vec<_>>(),
            got.iter().map(|l| l.parity).collect::<Vec<_>>()
        );
        for (g, w) in got.iter().zip(&want) {
            assert!((g.value - w.value).abs() < 1e-3 * w.value);
            assert!((g.normalized - w.normalized).abs() < 1e-3 * w.normalized);
        }
        assert_eq!(want[0].parity, Parity::Symmetric);
        assert_eq!(want[1].parity, Parity::Antisymmetric);
    }

    #[test]
    fn rate_fit() {
        let pts: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e: &f64| (e, 3.0 * e.powf(1.5)))
            .collect();
        assert!((fit_rate(&pts).unwrap() - 1.5).abs() < 1e-12);
        assert!(fit_rate(&[(0.1, 1.0)]).is_none());
        assert!(fit_rate(&[(0.1, 0.0), (0.05, 0.0)]).is_none());
    }

    #[test]
    fn branches_follow_values() {
        // a new eigenvalue enters below both branches
        let cols = vec![vec![5.0, 8.0], vec![4.0, 5.1, 7.9], vec![3.0, 5.2, 7.8]];
        let b = track_branches(&cols);
        assert_eq!(b[0], vec![5.0, 5.1, 5.2]);
        assert_eq!(b[1], vec![8.0, 7.9, 7.8]);
        assert!(track_branches(&[]).is_empty());
    }

    #[test]
    fn manifest_hash_is_deterministic() {
        let mut a = Manifest::new("spectrum", &serde_json::json!({"eps": 0.05})).unwrap();
        let b = Manifest::new("spectrum", &serde_json::json!({"eps": 0.05})).unwrap();
        assert_eq!(a.content_hash, b.content_hash);
        a.add_output("spectrum.csv", b"x");
        assert_ne!(a.content_hash, b.content_hash);
        assert_eq!(a.outputs[0].sha256, sha256_hex(b"x"));
        assert!(!a.to_json().contains("time"));
    }

    #[test]
    fn empty_and_invalid_regimes() {
        let p = TrapezoidParams::default();
        let c = verify_discrete(0.0, &DEFAULT_EPS_LIST, 1, &p).unwrap();
        assert!(c.records.is_empty() && !c.passed);
        assert!(verify_discrete(0.5, &[0.05, 0.1], 1, &p).is_err());
        assert!(verify_generic(0.5, &[], 1, &[], &p).is_err());
        assert!(verify_threshold(0.5, &[0.1], 0, &p).is_err());
    }

    #[test]
    fn model_k_at_zero_tau_is_the_threshold_regime() {
        let p = TrapezoidParams::default();
        let eps = [0.1, 0.05];
        let k = verify_model_k(1.3192, 23.9, &[0.0], &eps, &p).unwrap();
        let t = verify_threshold(1.3192, &eps, 1, &p).unwrap();
        for (a, b) in k.records.iter().zip(&t.records) {
            assert_eq!(a.computed, b.computed);
            assert!((a.residual - b.residual).abs() < 1e-10);
            assert!((a.predicted - PI * PI / 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn dive_csv_layout() {
        let p = TrapezoidParams::default();
        let t = dive_sweep(0.1, &[0.0, 0.2], GammaBc::Neumann, 2, &p).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "alpha,threshold,lambda_1,lambda_2,below_count");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.00000000000e0,"));
        assert_eq!(t.branches.len(), 2);
    }
}
