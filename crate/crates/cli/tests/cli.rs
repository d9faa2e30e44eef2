use std::path::Path;
use std::process::{Command, Output};

use gapless_core::ExtFloat;

fn gapless(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapless")).args(args).output().expect("spawn gapless")
}

fn gapless_env(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapless"))
        .args(args)
        .env("GAPLESS_WORKERS", workers)
        .output()
        .expect("spawn gapless")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn default_sweep_has_nine_decreasing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let svg = dir.path().join("sweep.svg");
    let out = gapless(&["gap-sweep", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&csv);
    assert_eq!(
        text.lines().next().unwrap(),
        "mu,lambda1,lambda2,gap,diameter,d2gap,rayleigh_upper,h1_at_0,max_location"
    );
    let d2: Vec<ExtFloat> = column(&text, "d2gap").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(d2.len(), 9);
    assert!(d2.windows(2).all(|w| w[1] < w[0]));
    let plot = read(&svg);
    assert!(plot.starts_with("<svg") && plot.contains("<path"));
}

#[test]
fn single_point_sweep_to_stdout() {
    let out = gapless(&["gap-sweep", "--mu", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("mu,"));
    assert!(text.lines().nth(1).unwrap().starts_with("1.0000000000000000e2,6.0307159310"));
}

#[test]
fn chain_sweep_header_and_missing_deltas() {
    let out = gapless(&["gap-sweep", "--n", "4", "--deltas", "0.7,0.7", "--mu", "100,1000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("mu,kappa1,kappa2,kappa3,lambda1,lambda2,gap\n"));
    assert_eq!(text.lines().count(), 3);

    let bad = gapless(&["gap-sweep", "--n", "3", "--mu", "100"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("config error"));
}

#[test]
fn output_is_byte_deterministic_across_worker_counts() {
    let args = ["gap-sweep", "--mu", "100,1000,10000"];
    let a = gapless_env(&args, "1");
    let b = gapless_env(&args, "3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"L": 0.9, "mu_values": [100, 200]}"#).unwrap();
    let out = gapless(&["gap-sweep", "--config", cfg.to_str().unwrap(), "--mu", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(column(&text, "mu"), vec!["3.0000000000000000e2"]);

    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(gapless(&["gap-sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_default_config() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = gapless(&["verify", "--report", report.to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_str(&read(&report)).unwrap();
    let checks = json["checks"].as_array().unwrap();
    let failed: Vec<&str> =
        checks.iter().filter(|c| !c["passed"].as_bool().unwrap()).map(|c| c["name"].as_str().unwrap()).collect();
    // the neck inequality is false for every L > 0
    assert_eq!(failed, vec!["geometry.neck_ratio"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(checks.len() > 20);
    assert!(checks.iter().all(|c| c["margin"].is_number()));
}

#[test]
fn verify_rejects_half_pi_before_running() {
    let out = gapless(&["verify", "--L", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_skips_points_above_precision_cap() {
    let out = gapless(&["verify", "--mu", "100,1000,1e7", "--mu-cap", "1e7"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("precision budget"), "{stderr}");
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["mu_skipped"], serde_json::json!([1e7]));
    assert_eq!(json["mu_checked"], serde_json::json!([100.0, 1000.0]));
}

#[test]
fn eigen_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h1.csv");
    let svg = dir.path().join("h1.svg");
    let out =
        gapless(&["eigen", "--mu", "1e4", "--k", "1", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&csv);
    assert!(text.starts_with("phi,h\n"));
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',').map(|v| v.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    let n = rows.len() - 1;
    assert_eq!(rows[0].1, 0.0);
    assert_eq!(rows[n].1, 0.0);
    assert!(text.lines().nth(1).unwrap().ends_with(",0"));
    let (imax, _) = rows.iter().enumerate().fold((0, f64::MIN), |b, (i, r)| if r.1 > b.1 { (i, r.1) } else { b });
    // double peak: the maximum sits away from the center, mirrored on the other side
    assert!(rows[imax].0.abs() > 0.5);
    assert!((rows[n - imax].1 - rows[imax].1).abs() < 1e-9);
    assert!(rows[n / 2].1 < 1e-3 * rows[imax].1);
    assert!(read(&svg).contains("<path"));

    let odd = gapless(&["eigen", "--mu", "1e4", "--k", "2"]);
    assert_eq!(odd.status.code(), Some(0));
    let text = String::from_utf8(odd.stdout).unwrap();
    let values: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(values[values.len() / 2], "0,0");

    assert_eq!(gapless(&["eigen", "--mu", "1e4", "--k", "9"]).status.code(), Some(1));
}

#[test]
fn geometry_queries() {
    let out = gapless(&["geometry", "distance", "--from", "-1,1", "--to", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = v["distance"].as_f64().unwrap();
    assert!((d - 2.0 * 1f64.asinh()).abs() < 1e-15);

    let out = gapless(&["geometry", "diameter", "--mu", "100"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let diam = v["diameter"].as_f64().unwrap();
    assert!(v["lower_bound"].as_f64().unwrap() <= diam && diam <= v["upper_bound"].as_f64().unwrap());

    assert_eq!(gapless(&["geometry", "distance", "--from", "0,-1", "--to", "0,1"]).status.code(), Some(1));
}
