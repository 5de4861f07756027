use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use groupoid_lab::{emit_summary, RunReport};
use markov_groupoids::diagnostics::{Averaging, DecayCurve};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupoid-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn batch(dir: &Path, body: &str) -> String {
    let path = dir.join("batch.toml");
    fs::write(&path, format!("output = {:?}\n\n{body}", dir.join("out"))).unwrap();
    path.to_str().unwrap().to_string()
}

const ZD: &str =
    "[[experiment]]\nname = \"zd\"\nexperiment = \"zd-liouville\"\nhorizon = 16\nepsilon = 0.6\n";

#[test]
fn list_names_every_builtin_with_an_anchor() {
    let first = lab(&["list"]);
    assert!(first.status.success());
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    assert!(text.lines().count() >= 8);
    assert!(text.lines().all(|l| l.contains(" → ")));
    assert!(text.contains("boundary-action"));
    assert_eq!(lab(&["list"]).stdout, first.stdout);
}

#[test]
fn matching_run_exits_zero_and_writes_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&["run", &batch(tmp.path(), ZD)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let root = tmp.path().join("out");
    let csv = fs::read_to_string(root.join("zd/curve-0.csv")).unwrap();
    assert!(csv.starts_with("n,tv_lo,tv_hi\n"));
    let curve = DecayCurve::from_csv(Averaging::Cesaro, "zd", &csv).unwrap();
    assert_eq!(curve.horizon(), 16);
    let report = RunReport::load(&root.join("report.json")).unwrap();
    assert!(report.passed());
    assert_eq!(
        report.records[0].artifacts,
        ["zd/curve-0.csv", "zd/certificate.json"]
    );
    assert!(report.timing("zd").is_some());
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(root.join("zd/certificate.json")).unwrap())
            .unwrap();
    assert_eq!(cert["verdict_text"], report.records[0].verdict_text);
}

#[test]
fn mismatched_expectation_exits_two_with_a_diff() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&[
        "run",
        &batch(tmp.path(), &format!("{ZD}expect = \"non-liouville\"\n")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("zd: expected non-liouville, observed amenable-consistent"),
        "{err}"
    );
    assert!(String::from_utf8(out.stdout).unwrap().contains("! zd"));
}

#[test]
fn invalid_configs_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    for body in [
        "[[experiment]]\nname = \"x\"\nexperiment = \"zd-liouville\"\nhorizon = 0\n",
        "[[experiment]]\nname = \"x\"\nexperiment = \"zd-liouville\"\nepsilon = 2.5\n",
        "[[experiment]]\nname = \"x\"\nexperiment = \"no-such-suite\"\n",
        "[[experiment]]\nname = \"x\"\nexperiment = \"model-equivariance\"\nmodel = \"no-such-model\"\n",
        "[[experiment]]\nname = \"x\"\nexperiment = \"zd-liouville\"\nmodel = \"rwre-parity\"\n",
        "[[experiment]]\nname = \"x\"\nexperiment = \"zd-liouville\"\ncolour = 3\n",
        "",
    ] {
        let out = lab(&["run", &batch(tmp.path(), body)]);
        assert_eq!(out.status.code(), Some(1), "{body}");
        assert!(String::from_utf8(out.stderr).unwrap().contains("invalid config"), "{body}");
    }
    assert_eq!(
        lab(&["run", "/nonexistent/batch.toml"]).status.code(),
        Some(1)
    );
}

#[test]
fn flags_override_every_experiment() {
    let tmp = tempfile::tempdir().unwrap();
    let other = tmp.path().join("elsewhere");
    let out = lab(&[
        "run",
        &batch(tmp.path(), ZD),
        "--horizon",
        "8",
        "--epsilon",
        "0.9",
        "--output",
        other.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = RunReport::load(&other.join("report.json")).unwrap();
    assert_eq!(report.records[0].horizon, 8);
    assert_eq!(report.records[0].settings.thresholds.epsilon, 0.9);
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn summary_flags_failures_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good");
    let bad = tmp.path().join("bad");
    fs::create_dir_all(&good).unwrap();
    fs::create_dir_all(&bad).unwrap();
    assert!(lab(&["run", &batch(&good, ZD)]).status.success());
    let body = "[[experiment]]\nname = \"model\"\nexperiment = \"model-equivariance\"\nmodel = \"rwre-parity\"\nexpect = \"not-equivariant\"\n";
    assert_eq!(lab(&["run", &batch(&bad, body)]).status.code(), Some(2));

    let reports = [good.join("out/report.json"), bad.join("out/report.json")]
        .map(|p| p.to_str().unwrap().to_string());
    let single = lab(&["summary", &reports[0]]);
    assert!(single.status.success());
    let text = String::from_utf8(single.stdout).unwrap();
    assert_eq!(
        text.lines()
            .filter(|l| l.contains("zd-liouville") || l.starts_with("  zd"))
            .count(),
        1
    );

    let mixed = lab(&["summary", &reports[0], &reports[1]]);
    assert_eq!(mixed.status.code(), Some(2));
    let text = String::from_utf8(mixed.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("! model")));
    assert!(text.lines().any(|l| l.starts_with("  zd")));
    assert!(text.contains("1 of 2 experiments match"));

    let again = tmp.path().join("again");
    fs::create_dir_all(&again).unwrap();
    assert!(lab(&["run", &batch(&again, ZD)]).status.success());
    assert_eq!(
        fs::read(good.join("out/report.json")).unwrap(),
        fs::read(again.join("out/report.json")).unwrap()
    );
    let a = emit_summary(&[RunReport::load(&good.join("out/report.json")).unwrap()]);
    let b = emit_summary(&[RunReport::load(&again.join("out/report.json")).unwrap()]);
    assert_eq!(a, b);
}

#[test]
fn init_prints_a_runnable_batch() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&[
        "init",
        "model-equivariance",
        "rwrtp-periodic",
        "--output",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let path = tmp.path().join("batch.toml");
    fs::write(&path, out.stdout).unwrap();
    let run = lab(&["run", path.to_str().unwrap()]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(lab(&["init", "no-such-suite"]).status.code(), Some(1));
}

#[test]
fn worker_count_must_be_a_number() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_groupoid-lab"))
        .args(["run", &batch(tmp.path(), ZD)])
        .env("GROUPOID_LAB_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
