use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;
use uurlab::config::{parse_config, ExperimentSpec};
use uurlab_core::interferometer::{simulate_scan_set, ArmSetting, InterferometerConfig};
use uurlab_core::qlinalg::rotation_unitary;
use uurlab_core::PureState;

fn uurlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uurlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn help_and_version() {
    assert!(uurlab(&["--help"]).status.success());
    let v = uurlab(&["--version"]);
    assert!(v.status.success());
    assert!(stdout(&v).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn musmap_writes_declared_tables() {
    let tmp = tempdir().unwrap();
    let out = tmp.path().join("m");
    let o = uurlab(&["musmap", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS musmap.families"));
    let s = summary(&out);
    assert_eq!(s["kind"], "musmap");
    assert_eq!(s["passed"], true);
    assert_eq!(s["version"], env!("CARGO_PKG_VERSION"));
    for f in s["files"].as_array().unwrap() {
        assert!(out.join(f.as_str().unwrap()).is_file(), "{f} missing");
    }
    assert_eq!(s["reports"]["family_count"], 2);
}

#[test]
fn same_seed_gives_identical_tables() {
    let tmp = tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let dir = tmp.path().join(name);
        let o = uurlab(&["fig4", "--seed", seed, "--out", dir.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        fs::read(dir.join("fig4.csv")).unwrap()
    };
    let (a, b, c) = (run("a", "7"), run("b", "7"), run("c", "8"));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn resolved_config_reproduces_the_run() {
    let tmp = tempdir().unwrap();
    let first = tmp.path().join("first");
    let o = uurlab(&["otoc", "--seed", "3", "--out", first.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let mut config = summary(&first)["config"].clone();
    let second = tmp.path().join("second");
    config["output_dir"] = Value::String(second.to_string_lossy().into_owned());
    let path = tmp.path().join("resolved.json");
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();

    let spec: ExperimentSpec = parse_config(&fs::read_to_string(&path).unwrap(), &path).unwrap();
    assert_eq!(spec.seed, 3);
    let o = uurlab(&["otoc", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        fs::read(first.join("otoc.csv")).unwrap(),
        fs::read(second.join("otoc.csv")).unwrap()
    );
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempdir().unwrap();
    let cases = [
        (
            r#"{"kind": "fig4", "counts_scale": -1}"#,
            "fig4",
            "counts_scale",
        ),
        (
            r#"{"kind": "fig4", "bogus": 1}"#,
            "fig4",
            "unknown key `bogus`",
        ),
        (r#"{"kind": "fig4""#, "fig4", "not valid JSON"),
        (r#"{"kind": "fig3"}"#, "fig4", "`fig4` was requested"),
        (r#"{"kind": "fig9"}"#, "fig4", "unknown experiment kind"),
        (
            r#"{"kind": "fit-csv"}"#,
            "fit-csv",
            "missing required field `files`",
        ),
    ];
    for (k, (text, kind, needle)) in cases.iter().enumerate() {
        let path = tmp.path().join(format!("c{k}.json"));
        fs::write(&path, text).unwrap();
        let o = uurlab(&[kind, "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(stderr(&o).contains(needle), "{text}: {}", stderr(&o));
    }
    let o = uurlab(&[
        "fig4",
        "--config",
        tmp.path().join("absent.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        uurlab(&["fig4", "--seed", "minus-one"]).status.code(),
        Some(2)
    );
}

#[test]
fn fit_csv_missing_file_is_an_error() {
    let o = uurlab(&["fit-csv", "no/such/scan_U_V.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("input file not found"));
    assert_eq!(uurlab(&["fit-csv"]).status.code(), Some(2));
}

#[test]
fn fit_csv_reconstructs_the_relation() {
    let tmp = tempdir().unwrap();
    let data = tmp.path().join("data");
    fs::create_dir(&data).unwrap();
    let u = rotation_unitary([1.0, 0.0, 0.0], 1.0).unwrap();
    let v = rotation_unitary([0.0, 1.0, 0.0], 1.3).unwrap();
    let h = PureState::basis(2, 0).unwrap().density();
    let cfg = InterferometerConfig {
        seed: 11,
        ..InterferometerConfig::default()
    };
    let set = simulate_scan_set(
        &cfg,
        &h,
        &ArmSetting::fixed("U", u),
        &ArmSetting::fixed("V", v),
        0,
    )
    .unwrap();
    let files: Vec<String> = set
        .scans()
        .map(|s| s.save(&data).unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(files.len(), 4);

    let out = tmp.path().join("fits");
    let mut args = vec![
        "fit-csv",
        "--counts-scale",
        "4000",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(files.iter().map(String::as_str));
    let o = uurlab(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS fit.uur-bargmann"));

    let fit: Value =
        serde_json::from_str(&fs::read_to_string(out.join("fit_scan_U_V.json")).unwrap()).unwrap();
    for key in [
        "A1",
        "A2",
        "theta0",
        "se_A1",
        "se_A2",
        "se_theta0",
        "visibility",
        "visibility_se",
        "chi2_dof",
    ] {
        assert!(fit[key].is_number(), "{key}");
    }
    let rel = &summary(&out)["reports"]["uur_bargmann"];
    let (lhs, rhs) = (rel["lhs"].as_f64().unwrap(), rel["rhs"].as_f64().unwrap());
    assert!(
        (lhs - rhs).abs() < 0.1,
        "pure input should sit near saturation: {lhs} vs {rhs}"
    );
}

#[test]
fn fit_csv_rejects_bad_counts_scale() {
    let o = uurlab(&["fit-csv", "--counts-scale=-3", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("counts_scale"));
}

#[test]
fn verify_reports_every_check() {
    let tmp = tempdir().unwrap();
    let out = tmp.path().join("v");
    let o = uurlab(&["verify", "--out", out.to_str().unwrap()]);
    let text = stdout(&o);
    for n in 1..=15 {
        assert!(text.contains(&format!("c{n:02}.")), "criterion {n} missing");
    }
    let failures: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    let expected = if failures.is_empty() { 0 } else { 1 };
    assert_eq!(o.status.code(), Some(expected));
    let s = summary(&out);
    assert_eq!(s["passed"], failures.is_empty());
    assert!(out.join("verify.csv").is_file());
}
