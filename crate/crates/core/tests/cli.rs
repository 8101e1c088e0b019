use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn strip_lab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strip-lab"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("STRIP_LAB_OUT")
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &Path) {
    let value: Value = serde_json::from_str(&std::fs::read_to_string(doc).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&value)
        .map(|e| e.to_string())
        .collect();
    assert!(
        errors.is_empty(),
        "{} fails {name}: {errors:?}",
        doc.display()
    );
}

fn csv_rows(p: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (
        header,
        lines
            .map(|l| l.split(',').map(String::from).collect())
            .collect(),
    )
}

#[test]
fn spectrum_alpha0_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |d: &Path| {
        strip_lab(
            d,
            &["spectrum", "--eps", "0.05", "--alpha", "0", "--count", "3"],
        )
    };
    let o = run(dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let base = dir.path().join("spectrum");
    let (header, rows) = csv_rows(&base.join("spectrum.csv"));
    assert_eq!(header[0], "p");
    assert_eq!(header[1], "lambda");
    for (p, r) in rows.iter().enumerate() {
        let lambda: f64 = r[1].parse().unwrap();
        let want = PI * PI * (400.0 + (p as f64 + 0.5).powi(2));
        assert!((lambda - want).abs() < 1e-3 * want);
        assert!(r[1].contains('e'));
    }
    assert_valid("manifest", &base.join("manifest.json"));

    let again = tempfile::tempdir().unwrap();
    assert_eq!(run(again.path()).status.code(), Some(0));
    for f in ["spectrum.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(base.join(f)).unwrap(),
            std::fs::read(again.path().join("spectrum").join(f)).unwrap()
        );
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = strip_lab(dir.path(), &["spectrum", "--eps", "0.05"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(strip_lab(dir.path(), &["nonsense"]).status.code(), Some(2));
    assert_eq!(
        strip_lab(dir.path(), &["spectrum", "--alpha", "1.7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        strip_lab(dir.path(), &["scan", "--truncation-l", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        Command::new(env!("CARGO_BIN_EXE_strip-lab"))
            .arg("--help")
            .output()
            .unwrap()
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn config_precedence_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let file_out = dir.path().join("from-file");
    std::fs::write(
        &cfg,
        format!(
            "eps = 0.1\nalpha = 0.2\ncount = 2\nout_dir = {:?}\n",
            file_out
        ),
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_strip-lab"))
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "spectrum",
            "--eps",
            "0.05",
        ])
        .env_remove("STRIP_LAB_OUT")
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let m: Value = serde_json::from_str(
        &std::fs::read_to_string(file_out.join("spectrum/manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["params"]["eps"], 0.05);
    assert_eq!(m["params"]["alpha"], 0.2);
    assert_eq!(m["params"]["count"], 2);

    let env_out = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_strip-lab"))
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "model1d",
            "--samples",
            "3",
        ])
        .env("STRIP_LAB_OUT", &env_out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_out.join("model1d/model1d.csv").exists());

    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_strip-lab"))
        .args(["--config", cfg.to_str().unwrap(), "model1d"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn model1d_sweep_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = strip_lab(
        dir.path(),
        &[
            "model1d",
            "--variant",
            "k",
            "--two-b",
            "1",
            "--tau-range",
            "-30",
            "30",
            "--samples",
            "61",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&dir.path().join("model1d/model1d.csv"));
    assert_eq!(
        header,
        ["tau", "c", "eta_1", "eta_2", "eta_3", "eta_4", "eta_5"]
    );
    assert_eq!(rows.len(), 61);
    // c = 2Bτ = τ; at τ = 30 the first eigenvalue is about −c²
    let last: Vec<f64> = rows[60].iter().map(|s| s.parse().unwrap()).collect();
    assert!((last[2] / -900.0 - 1.0).abs() < 1e-3);
}

#[test]
fn mesh_and_broken_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = strip_lab(
        dir.path(),
        &["mesh-dump", "--eps", "0.1", "--alpha", "-0.4"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_valid("mesh", &dir.path().join("mesh-dump/mesh.json"));
    assert!(
        std::fs::read_to_string(dir.path().join("mesh-dump/mesh.txt"))
            .unwrap()
            .starts_with("# nodes")
    );

    let o = strip_lab(
        dir.path(),
        &["broken", "--eps", "0.1", "--alpha", "0", "--count", "4"],
    );
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_rows(&dir.path().join("broken/broken.csv"));
    let parities: Vec<&str> = rows.iter().map(|r| r[3].as_str()).collect();
    assert_eq!(
        parities,
        ["symmetric", "antisymmetric", "symmetric", "antisymmetric"]
    );
}

#[test]
fn scattering_commands_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = strip_lab(
        dir.path(),
        &["scan", "--samples", "6", "--no-refine", "--near-h", "0.08"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (header, rows) = csv_rows(&dir.path().join("scan/scan.csv"));
    assert_eq!(header[0], "alpha");
    assert_eq!(rows.len(), 6);

    let o = strip_lab(
        dir.path(),
        &["thresholds", "--max-alpha", "1.5", "--near-h", "0.08"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let t = dir.path().join("thresholds/thresholds.json");
    assert_valid("thresholds", &t);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let alphas: Vec<f64> = v["alphas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_f64().unwrap())
        .collect();
    assert_eq!(alphas[0], 0.0);
    assert!((alphas[1] - 1.321).abs() < 0.01, "{alphas:?}");

    let o = strip_lab(
        dir.path(),
        &[
            "constants",
            "--alpha-star",
            "1.321",
            "--near-h",
            "0.05",
            "--d-h",
            "0.05",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let c = dir.path().join("constants/constants.json");
    assert_valid("constants", &c);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    let (b, br) = (
        v["constants"]["B"].as_f64().unwrap(),
        v["constants"]["B_rellich"].as_f64().unwrap(),
    );
    assert!((b - br).abs() < 0.01 * br);
}

#[test]
fn verify_writes_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let o = strip_lab(
        dir.path(),
        &[
            "verify",
            "--regime",
            "generic",
            "--alpha",
            "0.7854",
            "--eps-list",
            "0.1,0.05",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_valid("verify", &dir.path().join("verify/verify.json"));
    assert_valid("manifest", &dir.path().join("verify/manifest.json"));

    let o = strip_lab(
        dir.path(),
        &[
            "verify",
            "--regime",
            "discrete",
            "--alpha",
            "0.7854",
            "--eps-list",
            "0.05,0.1",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_schema_matches_loader() {
    let text = "eps = 0.05\norder = \"p1\"\neps_list = [0.1, 0.05]\n";
    let cfg = thinstrip::cli::config::FileConfig::parse(text).unwrap();
    assert_eq!(cfg.eps, Some(0.05));
    let as_json: Value =
        serde_json::to_value(toml::from_str::<toml::Value>(text).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema("config")).unwrap();
    assert!(validator.is_valid(&as_json));
    assert!(!validator.is_valid(&serde_json::json!({"bogus": 1})));
}
