use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BELL: &str =
    r#"{"dims":[2,2],"vector":[[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]}"#;

fn geoquant(args: &[&str]) -> Output {
    geoquant_env(args, None)
}

fn geoquant_env(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_geoquant"));
    cmd.args(args).env_remove("GEOQUANT_THREADS");
    if let Some(t) = threads {
        cmd.env("GEOQUANT_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_line(o: &Output) -> serde_json::Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text:?}"))
}

fn grid_to(dir: &Path, name: &str, threads: Option<&str>) -> String {
    let out = dir.join(name);
    let o = geoquant_env(
        &[
            "grid",
            "--nx",
            "51",
            "--nalpha",
            "51",
            "--out",
            out.to_str().unwrap(),
        ],
        threads,
    );
    assert!(o.status.success(), "{o:?}");
    fs::read_to_string(out).unwrap()
}

#[test]
fn grid_rows_and_bell_point() {
    let dir = TempDir::new().unwrap();
    let csv = grid_to(dir.path(), "surf.csv", None);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,alpha0,f2,concurrence");
    assert_eq!(lines.len(), 1 + 2601);
    let bell: Vec<f64> = lines[1 + 50 * 51 + 25]
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(bell[0], 1.0);
    assert!((bell[1] - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert!((bell[2] - 12.0).abs() < 1e-10);
    assert!((bell[3] - 1.0).abs() < 1e-10);
    // 17 significant digits
    assert_eq!(
        lines[1],
        "0.0000000000000000e0,0.0000000000000000e0,6.0000000000000000e0,0.0000000000000000e0"
    );
}

#[test]
fn grid_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let one = grid_to(dir.path(), "a.csv", Some("1"));
    let four = grid_to(dir.path(), "b.csv", Some("4"));
    let again = grid_to(dir.path(), "c.csv", None);
    assert_eq!(one, four);
    assert_eq!(one, again);
}

#[test]
fn separability_of_bell() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "bell.json", BELL);
    let o = geoquant(&["separability", "--state", &state]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("separable: false"), "{text}");
    assert!(text.contains("maximally-entangled: true"), "{text}");
    let norm: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("c-norm/n^2: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((norm - 0.8660254).abs() < 1e-7);
}

#[test]
fn separability_of_product_and_mixed() {
    let dir = TempDir::new().unwrap();
    let product = write(
        &dir,
        "p.json",
        r#"{"dims":[2,2],"vector":[[1,0],[0,0],[0,0],[0,0]]}"#,
    );
    let text = stdout(&geoquant(&["separability", "--state", &product]));
    assert!(text.contains("separable: true"), "{text}");
    let mixed = write(
        &dir,
        "m.json",
        r#"{"dims":[2,2],"matrix":[[0.25,0],[0,0],[0,0],[0,0],[0,0],[0.25,0],[0,0],[0,0],[0,0],[0,0],[0.25,0],[0,0],[0,0],[0,0],[0,0],[0.25,0]]}"#,
    );
    let text = stdout(&geoquant(&["separability", "--state", &mixed]));
    assert!(
        text.contains("separable: true") && text.contains("concurrence: 0"),
        "{text}"
    );
}

#[test]
fn pullback_json_and_csv() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "bell.json", BELL);
    let o = geoquant(&["pullback", "--state", &state, "--projective"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["projective"], true);
    assert_eq!(v["real"].as_array().unwrap().len(), 6);
    // Bell: ρ(σx⊗1 · 1⊗σx) = 1
    assert!((v["real"][0][3].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let out = dir.path().join("t.csv");
    let o = geoquant(&[
        "pullback",
        "--state",
        &state,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(out).unwrap();
    assert_eq!(csv.lines().next(), Some("j,k,real,imag"));
    assert_eq!(csv.lines().count(), 37);
}

#[test]
fn fisher_reports() {
    let o = geoquant(&["fisher", "--family", "gaussian", "--theta", "0.5,2"]);
    assert!(o.status.success(), "{o:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["F"][0][0].as_f64().unwrap() - 0.25).abs() < 1e-6);
    assert!((v["F"][1][1].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let o = geoquant(&[
        "fisher",
        "--family",
        "gaussian-phase",
        "--theta",
        "-0.5,1,0.2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["CovW"][2][2].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["Omega"][0][2].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let o = geoquant(&["fisher", "--family", "bernoulli", "--theta", "0.3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["G"][0][0].as_f64().unwrap() - (1.0 / 0.3 + 1.0 / 0.7)).abs() < 1e-6);

    let o = geoquant(&["fisher", "--family", "bloch", "--theta", "1.0,0.0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["G"][1][1].as_f64().unwrap() - 1f64.sin().powi(2)).abs() < 1e-6);
}

#[test]
fn check_suites() {
    let o = geoquant(&["check", "--suite", "all", "--seed", "7", "--trials", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        10
    );
    let o = geoquant(&["check", "--suite", "purity", "--trials", "10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["grid", "--nx", "1"],
        vec!["fisher", "--family", "gaussian", "--theta", "1"],
        vec!["fisher", "--family", "gaussian", "--theta", "0,-1"],
        vec!["fisher", "--family", "nope", "--theta", "1"],
        vec!["check", "--suite", "nope"],
    ] {
        let o = geoquant(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_line(&o)["error"], "usage", "{args:?}");
    }
    let o = geoquant_env(&["grid", "--nx", "3", "--nalpha", "3"], Some("zero"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_3() {
    let dir = TempDir::new().unwrap();
    let cases = [
        write(&dir, "broken.json", "{\"dims\": [2, 2], "),
        write(&dir, "shape.json", r#"{"matrix":[[1,0],[0,0],[0,0]]}"#),
        write(
            &dir,
            "trace.json",
            r#"{"matrix":[[1,0],[0,0],[0,0],[1,0]]}"#,
        ),
        dir.path()
            .join("missing.json")
            .to_string_lossy()
            .into_owned(),
    ];
    for state in &cases {
        let o = geoquant(&["separability", "--state", state]);
        assert_eq!(o.status.code(), Some(3), "{state}");
        assert_eq!(error_line(&o)["error"], "input");
    }
    let single = write(&dir, "qutrit.json", r#"{"vector":[[1,0],[0,0],[0,0]]}"#);
    assert_eq!(
        geoquant(&["separability", "--state", &single])
            .status
            .code(),
        Some(3)
    );
    // single-system states still have a pull-back tensor
    assert!(geoquant(&["pullback", "--state", &single]).status.success());
}
