use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn groundref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groundref"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .display()
        .to_string()
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    groundref(&args)
}

#[test]
fn run_writes_the_artifact_set() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_into(
        tmp.path(),
        &["--preset", "sord", "--scenario", &scenario("car_toward.json"), "--emit-detections"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["height_psd.csv", "summed_psd.csv", "features.json", "run_log.json", "detections.csv"] {
        assert!(tmp.path().join(f).exists(), "{f} missing");
    }
    let features: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("features.json")).unwrap()).unwrap();
    for key in ["threshold_m", "ratio_above", "power_total"] {
        assert!(features[key].is_number(), "{key}");
    }
    let psd = fs::read_to_string(tmp.path().join("height_psd.csv")).unwrap();
    assert_eq!(psd.lines().nth(1), Some("height_m,psd"));
    let det = fs::read_to_string(tmp.path().join("detections.csv")).unwrap();
    assert_eq!(det.lines().next(), Some("timestamp_s,range_m,velocity_mps,power_db"));
    assert!(!tmp.path().join("cube.bin").exists());
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--scenario", &scenario("sor/truck_away.json"), "--seed", "9"];
    assert!(run_into(a.path(), &args).status.success());
    assert!(run_into(b.path(), &args).status.success());
    for f in ["height_psd.csv", "summed_psd.csv", "features.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn sor_truck_exceeds_sor_car() {
    let dirs: Vec<(tempfile::TempDir, &str)> = ["sor/truck_away.json", "sor/car_away.json"]
        .into_iter()
        .map(|s| (tempfile::tempdir().unwrap(), s))
        .collect();
    let mut ratios = Vec::new();
    for (dir, s) in &dirs {
        let out = run_into(dir.path(), &["--preset", "sor", "--scenario", &scenario(s)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("features.json")).unwrap()).unwrap();
        ratios.push(v["ratio_above"].as_f64().unwrap());
    }
    assert!(ratios[0] > ratios[1], "{ratios:?}");
}

#[test]
fn validation_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"preset": "sord", "scene": {"scatterers": [], "n_cycles": 3, "colour": 1}}"#).unwrap();
    let out = run_into(&tmp.path().join("o"), &["--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "scenario");
    assert!(!tmp.path().join("o").exists(), "no partial output");

    // A SoRD passage does not fit the 56 m SoR radar.
    let out = run_into(
        &tmp.path().join("o"),
        &["--preset", "sor", "--scenario", &scenario("truck_away.json")],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(groundref(&["run", "--strategy", "fft"]).status.code(), Some(2));
}

#[test]
fn pipeline_errors_exit_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let stat = tmp.path().join("static.json");
    fs::write(
        &stat,
        r#"{"preset": "sord", "scene": {"scatterers": [{"initial_ground_distance": 60.0,
            "radial_velocity": 0.0, "height": 1.0, "rcs": 1.0}], "n_cycles": 20}}"#,
    )
    .unwrap();
    let out = run_into(&tmp.path().join("o"), &["--scenario", stat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "degenerate_series");
    assert!(!tmp.path().join("o").exists());
}

fn write_features(dir: &Path, ratio: f64, threshold: f64) -> PathBuf {
    fs::create_dir_all(dir).unwrap();
    let f = serde_json::json!({
        "scenario": "x", "strategy": "sord", "threshold_m": threshold,
        "ratio_above": ratio, "power_total": 1.0, "power_above": ratio, "peak_height_m": 1.0
    });
    fs::write(dir.join("features.json"), f.to_string()).unwrap();
    dir.to_path_buf()
}

#[test]
fn compare_reports_pairwise_ratios() {
    let tmp = tempfile::tempdir().unwrap();
    let a = write_features(&tmp.path().join("truck"), 0.10, 6.0);
    let b = write_features(&tmp.path().join("car"), 0.05, 6.0);
    let out = groundref(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(table.lines().nth(1), Some("truck,6,0.1,1,2"));

    assert_eq!(groundref(&["compare", a.to_str().unwrap()]).status.code(), Some(2));
    let c = write_features(&tmp.path().join("other"), 0.05, 5.0);
    let out = groundref(&["compare", a.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn presets_lists_both_waveforms() {
    let out = groundref(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("sor ") && l.contains("0.43837")));
    assert!(text.lines().any(|l| l.starts_with("sord") && l.contains("0.33763")));
}
