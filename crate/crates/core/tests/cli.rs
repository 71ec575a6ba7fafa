//! End-to-end runs of the `rellich` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn rellich(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rellich"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn factorize_prints_the_normal_form() {
    let o = rellich(&["factorize", "--alpha", "2", "--beta", "0", "--dim", "symbolic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("Δ²"), "{out}");
    // α(4−α) at α = 2 in front of |x|^-4 D²
    assert!(out.contains("4|x|^-4 (x·∇)²"), "{out}");
}

#[test]
fn halfline_optimum() {
    let o = rellich(&["optimize", "--family", "halfline"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("2 - (5/2)^(1/2), 2 + (5/2)^(1/2)"), "{out}");
    assert!(out.contains("value:       9/16"), "{out}");
}

#[test]
fn rellich_below_dimension_five_is_a_usage_error() {
    let o = rellich(&["verify", "--inequality", "2.10", "--dim", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n ≥ 5"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--bogus"][..],
        &["verify", "--inequality", "9.99"],
        &["optimize", "--family", "nope"],
        &["verify", "--inequality", "2.25", "--dim", "3", "--tol=-1"],
        &["w0", "--dim", "4"],
        &["partition", "--format", "csv"],
    ] {
        let o = rellich(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn verification_passes_and_reports_are_json() {
    let o = rellich(&["verify", "--inequality", "2.25", "--dim", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tool"], "rellich");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["pass"], true);
    let cfg = &v["config"];
    assert_eq!(cfg["command"], "verify");
    assert_eq!(cfg["tol"], 1e-9);
    assert_eq!(cfg["seed"], 0);
    assert_eq!(cfg["bindings"]["inequality"], "2.25");
    assert_eq!(cfg["bindings"]["profiles"], "default");
    assert!(v["result"][0]["rows"].as_array().unwrap().len() >= 15);
}

#[test]
fn text_reports_carry_version_and_config() {
    let o = rellich(&["ledger", "--gamma", "1", "--d", "11/10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(concat!("rellich ", env!("CARGO_PKG_VERSION"))));
    let cfg = lines.next().unwrap().strip_prefix("config: ").unwrap();
    let cfg: Value = serde_json::from_str(cfg).unwrap();
    assert_eq!(cfg["command"], "ledger");
    assert!(out.contains("88/125"), "{out}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["verify", "--profiles", "random", "--seed", "7", "--format", "json"][..],
        &["sharpness", "--inequality", "2.10", "--format", "csv"],
        &["reduce", "--dim", "5"],
    ] {
        let a = rellich(args);
        let b = rellich(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let seven = rellich(&["verify", "--inequality", "2.8", "--dim", "3", "--profiles", "random", "--seed", "7", "--format", "csv"]);
    let eight = rellich(&["verify", "--inequality", "2.8", "--dim", "3", "--profiles", "random", "--seed", "8", "--format", "csv"]);
    assert_ne!(seven.stdout, eight.stdout);
}

#[test]
fn out_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let p = path.to_str().unwrap();
    let o = rellich(&["verify", "--inequality", "2.33", "--format", "csv", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = std::fs::read(&path).unwrap();
    let direct = rellich(&["verify", "--inequality", "2.33", "--format", "csv"]);
    assert_eq!(written, direct.stdout);
    let header = String::from_utf8(written).unwrap();
    assert!(header.starts_with("inequality,params,profile,lhs,rhs,residual,error_bound,verdict\n"), "{header}");
    // nothing but the report is left behind
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, vec![std::ffi::OsString::from("report.csv")]);
}

#[test]
fn out_into_a_missing_directory_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("r.json");
    let o = rellich(&["ledger", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
}
