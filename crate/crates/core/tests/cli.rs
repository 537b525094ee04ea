use std::path::Path;
use std::process::{Command, Output};

use hanle_core::cli::{self, CSV_HEADER};
use hanle_core::parametric::alpha_beta;
use hanle_core::Superoperator;
use num_complex::Complex64;

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hanle-sim")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const VACUUM: &str = r#"{"preset": "rb87-d1-Fg2-Fe1-vacuum", "scan": {"min": -0.05, "max": 0.05, "count": 21}}"#;

#[test]
fn scan_writes_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.json", VACUUM);
    let out = sim(&["scan", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first[0], "-5.00000000000000e-2");
    let mantissa = first[1].split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 15);
    let centre: Vec<f64> = rows[10].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(centre[0], 0.0);
    assert!(centre[1] > 0.0);
}

#[test]
fn repeated_scans_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"components": [{"preset": "rb87-d1-Fg2-Fe1-vacuum"}, {"preset": "rb87-d1-Fg1-Fe2-vacuum"}],
            "scan": {"min": -0.02, "max": 0.02, "count": 15},
            "doppler": {"points": 5, "min": -2, "max": 2}}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(sim(&["scan", &cfg, "--output", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(
        sim(&["--jobs", "1", "scan", &cfg, "--output", b.to_str().unwrap()]).status.code(),
        Some(0)
    );
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn weighted_composition_adds_scaled_components() {
    let dir = tempfile::tempdir().unwrap();
    let read = |text: &str, name: &str| -> Vec<Vec<f64>> {
        let cfg = write(dir.path(), name, text);
        let out = sim(&["scan", &cfg]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    };
    let scan = r#""scan": {"min": 0.001, "max": 0.01, "count": 4}"#;
    let both = read(
        &format!(r#"{{"components": [{{"preset": "rb87-d1-Fg2-Fe1-vacuum"}}, {{"preset": "rb87-d1-Fg1-Fe2-vacuum", "weight": 2}}], {scan}}}"#),
        "both.json",
    );
    let a = read(&format!(r#"{{"preset": "rb87-d1-Fg2-Fe1-vacuum", {scan}}}"#), "a.json");
    let b = read(&format!(r#"{{"preset": "rb87-d1-Fg1-Fe2-vacuum", "weight": 1, {scan}}}"#), "b.json");
    for ((x, y), z) in both.iter().zip(&a).zip(&b) {
        for k in 1..4 {
            assert!((x[k] - (y[k] + 2.0 * z[k])).abs() < 1e-13 * x[k].abs().max(1e-30));
        }
    }
}

#[test]
fn unselected_columns_are_empty() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "q.json",
        r#"{"preset": "rb87-d1-Fg2-Fe1-vacuum", "outputs": ["quadrature"], "scan": {"min": 0, "max": 0.01, "count": 2}}"#,
    );
    let out = sim(&["scan", &cfg]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 4);
    assert!(row[1].is_empty() && row[2].is_empty() && !row[3].is_empty());
}

#[test]
fn config_errors_exit_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("never.csv");
    let cfg = write(
        dir.path(),
        "bad.json",
        &format!(
            r#"{{"preset": "rb87-d1-Fg2-Fe1-vacuum", "scan": {{"min": -1, "max": 1, "count": 1}}, "output": {:?}}}"#,
            target.to_str().unwrap()
        ),
    );
    let out = sim(&["scan", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scan.count"));
    assert!(!target.exists());

    let missing = sim(&["scan", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
    let typo = write(dir.path(), "typo.json", r#"{"preset": "rb87-d1-Fg2-Fe1-vacum", "scan": {"min": 0, "max": 1, "count": 3}}"#);
    let out = sim(&["scan", &typo]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("preset"));
}

#[test]
fn solver_errors_exit_3_and_name_the_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sing.json",
        r#"{"preset": "rb87-d1-Fg2-Fe1-vacuum", "params": {"gamma": 1e-16}, "scan": {"min": -0.01, "max": 0.01, "count": 3}}"#,
    );
    let out = sim(&["scan", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("B0 = 0"));
}

#[test]
fn doppler_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.json", r#"{"preset": "rb87-d1-Fg2-Fe1-vacuum", "scan": {"min": 0.002, "max": 0.004, "count": 2}}"#);
    let plain = sim(&["scan", &cfg]).stdout;
    let off = sim(&["scan", &cfg, "--doppler", "off"]).stdout;
    let on = sim(&["scan", &cfg, "--doppler", "on"]).stdout;
    assert_eq!(plain, off);
    assert_ne!(plain, on);
    assert_eq!(sim(&["scan", &cfg, "--doppler", "maybe"]).status.code(), Some(2));
}

#[test]
fn seed_variable_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", VACUUM);
    let a = sim(&["scan", &cfg]).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_hanle-sim"))
        .args(["scan", &cfg])
        .env("HANLE_SIM_SEEDLESS", "1")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, b);
}

#[test]
fn presets_are_listed() {
    let out = sim(&["presets"]);
    assert_eq!(out.status.code(), Some(0));
    let list: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = list.as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"rb87-d1-Fg2-Fe1-vacuum") && names.contains(&"rb87-d1-Fg1-Fe2-buffer"));
    assert_eq!(list[0]["weight"].as_f64(), Some(0.625));
}

#[test]
fn verify_passes() {
    let out = sim(&["verify"]);
    let table = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{table}");
    assert_eq!(table.matches("PASS").count(), 7);
}

fn flipped_alpha(m: &Superoperator, a: &hanle_core::linalg::CVector, d: f64) -> hanle_core::Result<(hanle_core::linalg::CVector, hanle_core::linalg::CVector)> {
    let (alpha, beta) = alpha_beta(m, a, d)?;
    Ok((alpha * Complex64::new(-1.0, 0.0), beta))
}

#[test]
fn verify_catches_a_sign_flip() {
    let mut buf = Vec::new();
    let code = cli::verify_with(&mut buf, flipped_alpha).unwrap();
    assert_eq!(code, 1);
    assert!(String::from_utf8(buf).unwrap().contains("FAIL"));
}

#[test]
fn shipped_configs_resolve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        hanle_core::cli::config::ScanConfig::from_file(&path)
            .and_then(|c| c.resolve())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 2);
}
