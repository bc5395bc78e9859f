use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SUBCOMMANDS: [&str; 19] = [
    "basic-seq",
    "sheffer-seq",
    "star",
    "map-equation",
    "newton",
    "ho-forward",
    "hermite",
    "lie-check",
    "sphere",
    "poincare",
    "doubling",
    "qp-inverse",
    "dispersion",
    "xhat-spectrum",
    "oscillator",
    "ground-state",
    "evolve",
    "ff-rep",
    "replay",
];

fn umbral(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umbral"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("UMBRAL_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn central_basic_sequence_as_json() {
    let dir = TempDir::new().unwrap();
    let o = umbral(
        &[
            "basic-seq",
            "--delta",
            "central",
            "--kmax",
            "5",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("q3 = x^3 - a^2*x"));
    let v = read_json(&dir.path().join("basic-seq.json"));
    let seq = v["sequence"].as_array().unwrap();
    assert_eq!(seq.len(), 6);
    assert_eq!(seq[3]["monomial"], "x^3 - a^2*x");
    assert_eq!(seq[3]["factorial"], "x^(3) + 3*a*x^(2)");
    let m = read_json(&dir.path().join("basic-seq.manifest.json"));
    assert_eq!(m["schema_version"], 1);
    assert_eq!(m["params"]["delta"], "central");
}

#[test]
fn numeric_spacing_is_substituted() {
    let dir = TempDir::new().unwrap();
    let o = umbral(
        &["basic-seq", "--delta", "central", "--spacing", "1/2"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("q3 = x^3 - 1/4*x"), "{}", stdout(&o));
}

#[test]
fn doubling_in_three_dimensions() {
    let dir = TempDir::new().unwrap();
    let o = umbral(&["doubling", "--dim", "3"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("8"));
    let o = umbral(&["doubling", "--dim", "3", "--include-time"], dir.path());
    assert_eq!(stdout(&o).lines().next(), Some("16"));
}

#[test]
fn singular_qp_is_a_domain_error_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let o = umbral(&["qp-inverse", "--N", "8"], &out);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("Q' singular (N=2m, m even)"), "{err}");
    let report: Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(report["kind"], "domain");
    assert!(!out.exists());
}

#[test]
fn invalid_flags_are_usage_errors_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    for args in [
        &["basic-seq", "--delta", "sideways"][..],
        &["basic-seq", "--delta", "central", "--spacing", "-1"],
        &["oscillator", "--bogus"],
        &["oscillator", "--N", "9"],
        &["ground-state", "--alpha", "1.5"],
        &["ff-rep", "--p", "4"],
        &["dispersion", "--N", "11", "--lambda", "2"],
        &["sphere", "--c", "2", "--spacing", "1,2"],
    ] {
        let o = umbral(args, &out);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!out.exists(), "{args:?} wrote output");
    }
}

#[test]
fn help_for_every_subcommand() {
    for sub in SUBCOMMANDS {
        let o = Command::new(env!("CARGO_BIN_EXE_umbral"))
            .args([sub, "--help"])
            .output()
            .unwrap();
        assert!(o.status.success(), "{sub}");
        let text = stdout(&o);
        assert!(
            text.contains("Usage:") && text.lines().count() > 3,
            "{sub}: {text}"
        );
    }
}

#[test]
fn exact_replay_is_byte_identical() {
    let first = TempDir::new().unwrap();
    let second = TempDir::new().unwrap();
    for (args, file) in [
        (
            &["sheffer-seq", "--delta", "forward", "--kmax", "6"][..],
            "sheffer-seq.csv",
        ),
        (&["ff-rep", "--p", "5"], "ff-rep.csv"),
        (
            &["ho-forward", "--spacing", "1/3", "--nmax", "12"],
            "ho-forward.csv",
        ),
    ] {
        assert!(umbral(args, first.path()).status.success());
        let manifest = first.path().join(format!("{}.manifest.json", args[0]));
        let o = umbral(&["replay", manifest.to_str().unwrap()], second.path());
        assert!(o.status.success(), "{}", stderr(&o));
        let a = fs::read(first.path().join(file)).unwrap();
        let b = fs::read(second.path().join(file)).unwrap();
        assert_eq!(a, b, "{file}");
        assert_eq!(
            fs::read(&manifest).unwrap(),
            fs::read(second.path().join(format!("{}.manifest.json", args[0]))).unwrap()
        );
    }
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records()
        .map(|rec| rec.unwrap()[idx].parse().unwrap())
        .collect()
}

#[test]
fn floating_replay_within_tolerance() {
    let first = TempDir::new().unwrap();
    let second = TempDir::new().unwrap();
    let args = ["oscillator", "--N", "66", "--spacing", "1/3", "--nlow", "8"];
    assert!(umbral(&args, first.path()).status.success());
    let manifest = first.path().join("oscillator.manifest.json");
    assert!(umbral(&["replay", manifest.to_str().unwrap()], second.path())
        .status
        .success());
    let a = column(&first.path().join("oscillator.csv"), "eigenvalue");
    let b = column(&second.path().join("oscillator.csv"), "eigenvalue");
    assert_eq!(a.len(), 8);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn bad_manifest_is_rejected() {
    let dir = TempDir::new().unwrap();
    assert!(umbral(&["doubling"], dir.path()).status.success());
    let path = dir.path().join("doubling.manifest.json");
    let mut m = read_json(&path);
    m["schema_version"] = 99.into();
    fs::write(&path, m.to_string()).unwrap();
    let o = umbral(&["replay", path.to_str().unwrap()], &dir.path().join("again"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("schema version"));
}

#[test]
fn output_directory_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_umbral"))
        .args(["ff-rep", "--p", "3"])
        .env("UMBRAL_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("ff-rep.csv").exists());
    assert!(dir.path().join("ff-rep.manifest.json").exists());
}

#[test]
fn spectrum_csv_layout() {
    let dir = TempDir::new().unwrap();
    let o = umbral(
        &["oscillator", "--N", "102", "--spacing", "1/2", "--nlow", "6"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("oscillator.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("index,eigenvalue,pair_id"));
    let o = umbral(
        &["ground-state", "--N", "121", "--spacing", "1/2", "--alpha", "0"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("ground-state.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("site,x,re,im"));
    assert_eq!(text.lines().count(), 122);
}

#[test]
fn evolution_writes_time_blocks() {
    let dir = TempDir::new().unwrap();
    let o = umbral(
        &[
            "evolve",
            "--N",
            "30",
            "--spacing",
            "1/2",
            "--steps",
            "20",
            "--stride",
            "10",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let steps = column(&dir.path().join("evolve.csv"), "step");
    assert_eq!(steps.len(), 3 * 30);
    assert_eq!(
        column(&dir.path().join("evolve-observables.csv"), "norm").len(),
        20
    );
    let m = read_json(&dir.path().join("evolve.manifest.json"));
    assert_eq!(m["results"]["within_tol"], true);
}

#[test]
fn poincare_reports_both_casimirs() {
    let dir = TempDir::new().unwrap();
    let o = umbral(&["poincare", "--degree", "3"], dir.path());
    assert!(o.status.success());
    let m = read_json(&dir.path().join("poincare.manifest.json"));
    assert_eq!(m["results"]["closure"], true);
    assert_eq!(m["results"]["kappa_casimir_central"], true);
    assert_eq!(m["results"]["lorentzian_casimir_central"], false);
}
