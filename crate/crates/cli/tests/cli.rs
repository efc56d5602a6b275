use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn intertwine(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intertwine"))
        .args(args)
        .current_dir(dir)
        .env_remove("INTERTWINE_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Exports `name` into `dir` and returns its config as a JSON value.
fn exported(name: &str, dir: &Path) -> Value {
    let out = intertwine(&["export", name, "--out", "x"], dir);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    serde_json::from_str(&fs::read_to_string(dir.join("x").join(format!("{name}.json"))).unwrap()).unwrap()
}

fn write_config(dir: &Path, name: &str, cfg: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path.display().to_string()
}

fn harmonic() -> Value {
    json!({
        "scenario": "small-harmonic",
        "family": { "kind": "first-order", "k": { "kind": "polynomial", "coeffs": [0.0, 0.0, 0.5] } },
        "grid": { "x_min": -8.0, "x_max": 8.0, "n": 401 },
        "time": { "dt": 1e-3, "steps": 20, "record_every": 5 },
        "source": { "kind": "separated", "level": 1 },
        "checks": [{ "kind": "construction" }, { "kind": "intertwining", "tol": 1e-2 }]
    })
}

#[test]
fn list_names_the_mandated_entries() {
    let tmp = TempDir::new().unwrap();
    let out = intertwine(&["list"], tmp.path());
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("harmonic-first-order (Eq. V_1/2)"), "{text}");
    assert!(text.contains("reflectionless-nonstat (§4.1)"), "{text}");
    assert!(text.lines().filter(|l| !l.trim().is_empty()).count() >= 12);
}

#[test]
fn harmonic_builtin_passes_with_every_entry() {
    let tmp = TempDir::new().unwrap();
    let out = intertwine(&["verify", "harmonic-first-order", "--out", "h"], tmp.path());
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    let report: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("h/report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], json!(true));
    let residuals = report["residuals"].as_array().unwrap();
    assert!(!residuals.is_empty());
    assert!(residuals.iter().all(|r| r["pass"] == json!(true)));
}

#[test]
fn negative_grid_size_is_a_located_validation_error() {
    let tmp = TempDir::new().unwrap();
    let mut cfg = harmonic();
    cfg["grid"]["n"] = json!(-5);
    let path = write_config(tmp.path(), "neg.json", &cfg);
    let out = intertwine(&["run", &path], tmp.path());
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("grid.n"), "{err}");
    let text = fs::read_to_string(&path).unwrap();
    let line = text.lines().position(|l| l.contains("\"n\": -5")).unwrap() + 1;
    assert!(err.contains(&format!("line {line},")), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    let tmp = TempDir::new().unwrap();
    let mut cfg = harmonic();
    cfg["grid"]["spacing"] = json!(0.1);
    let path = write_config(tmp.path(), "unk.json", &cfg);
    let out = intertwine(&["run", &path], tmp.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("grid.spacing"), "{}", stderr(&out));

    let mut cfg = harmonic();
    cfg["extra"] = json!(true);
    let path = write_config(tmp.path(), "unk2.json", &cfg);
    assert_eq!(code(&intertwine(&["run", &path], tmp.path())), 2);
}

#[test]
fn malformed_json_and_bad_check_combinations_exit_2() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("trunc.json");
    fs::write(&path, "{\n  \"scenario\": ").unwrap();
    assert_eq!(code(&intertwine(&["run", path.to_str().unwrap()], tmp.path())), 2);

    let mut cfg = harmonic();
    cfg["checks"].as_array_mut().unwrap().push(json!({ "kind": "reflectionless", "core": [-2.0, 2.0] }));
    let path = write_config(tmp.path(), "refl.json", &cfg);
    let out = intertwine(&["run", &path], tmp.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("checks[2].kind"), "{}", stderr(&out));
}

#[test]
fn unreachable_tolerance_is_an_honest_failure() {
    let tmp = TempDir::new().unwrap();
    let mut cfg = exported("painleve4-riccati", tmp.path());
    cfg["tolerances"] = json!({ "identity": 1e-14, "single": 1e-14, "composed": 1e-14, "propagated": 1e-14 });
    let path = write_config(tmp.path(), "tight.json", &cfg);
    let out = intertwine(&["run", &path, "--out", "tight"], tmp.path());
    assert_eq!(code(&out), 1, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("FAIL"));
    let report: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("tight/report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], json!(false));
}

#[test]
fn test_field_on_the_boundary_is_a_runtime_error() {
    let tmp = TempDir::new().unwrap();
    let mut cfg = harmonic();
    cfg["checks"] = json!([{ "kind": "symmetry", "operator": "charge-products", "centers": [-7.9], "width": 1.0 }]);
    let path = write_config(tmp.path(), "rt.json", &cfg);
    let out = intertwine(&["run", &path], tmp.path());
    assert_eq!(code(&out), 3, "{}{}", stdout(&out), stderr(&out));
}

#[test]
fn thread_count_must_be_positive() {
    let tmp = TempDir::new().unwrap();
    for bad in ["0", "many"] {
        let out = Command::new(env!("CARGO_BIN_EXE_intertwine"))
            .arg("list")
            .env("INTERTWINE_THREADS", bad)
            .current_dir(tmp.path())
            .output()
            .unwrap();
        assert_eq!(code(&out), 2, "INTERTWINE_THREADS={bad}");
    }
}

#[test]
fn unknown_builtin_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&intertwine(&["verify", "no-such-scenario"], tmp.path())), 2);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(tmp.path(), "h.json", &harmonic());
    let mut runs = Vec::new();
    for (dir, threads) in [("a", "1"), ("b", "1"), ("c", "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_intertwine"))
            .args(["run", &path, "--out", dir])
            .env("INTERTWINE_THREADS", threads)
            .current_dir(tmp.path())
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
        let read = |f: &str| fs::read(tmp.path().join(dir).join(f)).unwrap();
        runs.push((read("source.csv"), read("image.csv"), read("report.json")));
    }
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn field_csv_layout() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(tmp.path(), "h.json", &harmonic());
    assert_eq!(code(&intertwine(&["run", &path, "--out", "o"], tmp.path())), 0);
    let csv = fs::read_to_string(tmp.path().join("o/source.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,t,re,im"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    // 20 steps recorded every 5th: t = 0, 5dt, ..., 20dt
    assert_eq!(rows.len(), 5 * 401);
    assert!(rows.iter().all(|r| r.len() == 4));
    // time is the slow index, space the fast one
    assert!(rows[..401].iter().all(|r| r[1] == 0.0));
    assert!(rows[..401].windows(2).all(|w| w[1][0] > w[0][0]));
    assert!(rows[401][1] > 0.0);
    let first = csv.lines().nth(1).unwrap();
    let mantissa = first.split(',').next().unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
}

#[test]
fn export_writes_config_report_fields_and_plot() {
    let tmp = TempDir::new().unwrap();
    let out = intertwine(&["export", "harmonic-first-order", "--out", "exp"], tmp.path());
    assert_eq!(code(&out), 0);
    let dir = tmp.path().join("exp");
    for f in ["harmonic-first-order.json", "report.json", "source.csv", "image.csv", "plot.gp"] {
        assert!(dir.join(f).is_file(), "missing {f}");
    }
    let plot = fs::read_to_string(dir.join("plot.gp")).unwrap();
    assert!(plot.contains("'source.csv'") && plot.contains("'image.csv'"));
    // the exported config runs as-is
    let cfg = dir.join("harmonic-first-order.json");
    assert_eq!(code(&intertwine(&["run", cfg.to_str().unwrap(), "--out", "again"], tmp.path())), 0);
}
