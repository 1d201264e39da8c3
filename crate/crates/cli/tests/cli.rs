use std::path::PathBuf;
use std::process::{Command, Output};

use perturbed_green::asymptotics::KernelEval;
use perturbed_green::validation::{RateFit, CSV_HEADER};

fn pgreen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgreen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

const UNIT_DISK: &str = r#"{"variant":"PerturbedDisk","delta":{"cos":[1.0]},"epsilon":0.0}"#;
const HOLE: &str = r#"{"variant":"DiskWithHole","epsilon":0.1}"#;

#[test]
fn eval_unit_disk_green_at_half() {
    let out = pgreen(&[
        "eval",
        "--formula",
        "unit-disk-green",
        "--domain",
        UNIT_DISK,
        "--x",
        "0.5,0",
        "--y",
        "0,0",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let k: KernelEval = serde_json::from_slice(&out.stdout).unwrap();
    assert!((k.value - 0.110318).abs() < 1e-6, "{}", k.value);
    assert!((k.value - 2f64.ln() / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert_eq!(k.term("outer-green"), Some(k.value));
}

#[test]
fn eval_from_config_resolves_domain_file_next_to_it() {
    let out = pgreen(&["eval", "--config", &config("eval-unit-disk.json")]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let k: KernelEval = serde_json::from_slice(&out.stdout).unwrap();
    assert!((k.value - 0.110318).abs() < 1e-6);
}

#[test]
fn short_eps_list_is_a_config_error() {
    let out = pgreen(&[
        "sweep",
        "--formula",
        "dirichlet-hole-2d",
        "--domain",
        HOLE,
        "--eps",
        "0.1,0.05",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps list must have length ≥ 3"));
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"formula":"thin-rod","colour":"blue"}"#).unwrap();
    let out = pgreen(&["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn config_for_another_command_is_rejected() {
    let out = pgreen(&["sweep", "--config", &config("eval-unit-disk.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_flags_exit_with_config_status() {
    assert_eq!(pgreen(&["sweep", "--eps", "a,b"]).status.code(), Some(1));
    assert_eq!(pgreen(&["frobnicate"]).status.code(), Some(1));
    let out = pgreen(&[
        "eval",
        "--formula",
        "no-such-formula",
        "--domain",
        UNIT_DISK,
        "--x",
        "0,0",
        "--y",
        "0.1,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn points_outside_the_domain_are_config_errors() {
    let out = pgreen(&[
        "eval",
        "--formula",
        "dirichlet-hole-2d",
        "--domain",
        HOLE,
        "--x",
        "0.01,0",
        "--y",
        "0.5,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = pgreen(&[
            "sweep",
            "--formula",
            "mixed-outer-n-hole-d",
            "--domain",
            HOLE,
            "--eps",
            "0.08,0.04,0.02",
            "--seed",
            "3",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    // 3 eps values, each with an all row and three strata
    assert_eq!(text.lines().count(), 1 + 3 * 4);
    let leftover: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftover.len(), 2, "temporary files left behind");
}

#[test]
fn rates_output_parses_back_and_passes() {
    let out = pgreen(&["rates", "--config", &config("mixed-outer-d-hole-n.json")]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let fit: RateFit = serde_json::from_slice(&out.stdout).unwrap();
    assert!(fit.pass && (1.7..=2.3).contains(&fit.slope), "{fit:?}");
    let again = serde_json::to_string_pretty(&fit).unwrap();
    assert_eq!(
        again.trim_end(),
        String::from_utf8_lossy(&out.stdout).trim_end()
    );
}

#[test]
fn rates_outside_the_band_exit_with_acceptance_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strict.json");
    std::fs::write(
        &path,
        r#"{"formula":"mixed-outer-d-hole-n","domain":{"variant":"DiskWithHole","epsilon":0.16},
            "eps":[0.16,0.08,0.04],"expected":{"kind":"power","order":5.0,"lo":4.9,"hi":5.1}}"#,
    )
    .unwrap();
    let out = pgreen(&["rates", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let fit: RateFit = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!fit.pass);
}

#[test]
fn report_on_small_disk_hole_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = pgreen(&[
        "report",
        "--config",
        &config("dirichlet-hole-2d.json"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let row = &report["summary"][0];
    let slope = row["value"].as_f64().unwrap();
    assert!((0.8..=1.2).contains(&slope), "{slope}");
    assert_eq!(row["pass"], true);
    assert_eq!(report["pass"], true);
    assert_eq!(report["eps"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_reports_method_and_accuracy() {
    let out = pgreen(&["oracle", "--domain", HOLE, "--x", "0.5,0", "--y", "0,0.3"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["method"], "fourier-annulus");
    assert!(v["accuracy"].as_f64().unwrap() <= 1e-10);
    let value = v["value"].as_f64().unwrap();
    let again = pgreen(&["oracle", "--domain", HOLE, "--x", "0,0.3", "--y", "0.5,0"]);
    let w: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert!((w["value"].as_f64().unwrap() - value).abs() < 1e-12);
}

#[test]
fn suite_report_for_selected_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.json");
    std::fs::write(&cfg, r#"{"command":"report","criteria":[5,6]}"#).unwrap();
    let out_path = dir.path().join("suite-out.json");
    let out = pgreen(&[
        "report",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        stdout
            .lines()
            .filter(|l| l.starts_with("criterion"))
            .count(),
        2
    );
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert!(v["criteria"][0].get("seconds").is_none());
}
