use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spinwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinwork"))
        .args(args)
        .env("SPINWORK_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn data_rows(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(str::to_owned).collect()
}

fn header(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    text.lines().find(|l| !l.starts_with('#')).unwrap().to_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(spinwork(&["--help"]).status.code(), Some(0));
    assert_eq!(spinwork(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["ergotropy"],
        &["ergotropy", "--model", "heisenberg"],
        &["ergotropy", "--model", "xy", "--n", "4"],
        &["ergotropy", "--model", "xxx", "--gamma", "0.5"],
        &["ergotropy", "--model", "xx", "--n", "1"],
        &["ergotropy", "--model", "tfi", "--gamma", "0.3"],
        &["ergotropy", "--model", "xxx", "--n", "40"],
        &["sweep", "--model", "xx", "--ansatz", "star", "--axis", "n", "--from", "2", "--to", "3", "--step", "1"],
        &["sweep", "--model", "xx", "--ansatz", "nc", "--axis", "kappa", "--from", "2", "--to", "3", "--step", "1"],
        &["sweep", "--model", "xx", "--ansatz", "nc", "--axis", "n", "--from", "2", "--to", "3", "--step", "0"],
        &["sweep", "--model", "xx", "--ansatz", "nc", "--axis", "n", "--from", "2", "--to", "3", "--step", "1", "--trials", "0"],
        &["sweep", "--model", "xx", "--ansatz", "nc", "--axis", "n", "--from", "2", "--to", "3", "--step", "1", "--step-size", "-1"],
        &["bogus"],
    ];
    for args in cases {
        let out = spinwork(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn invalid_sweep_point_fails_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.csv");
    // gamma = 1.5 lies outside the XY range; the run must stop before optimizing
    let out = spinwork(&[
        "sweep", "--model", "xy", "--n", "3", "--ansatz", "nc", "--axis", "gamma", "--from", "0", "--to", "1.5",
        "--step", "0.5", "--trials", "5", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_path.exists());
}

#[test]
fn unwritable_output_exits_three() {
    let out = spinwork(&[
        "sweep", "--model", "xx", "--ansatz", "nc", "--axis", "n", "--from", "2", "--to", "2", "--step", "1",
        "--trials", "2", "--out", "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ergotropy_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let out = spinwork(&["ergotropy", "--model", "xx", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["ergotropy"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!((v["mean_energy"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["spectrum"].as_array().unwrap().len(), 4);

    let csv_path = dir.path().join("e.csv");
    let out = spinwork(&["ergotropy", "--model", "xxz", "--n", "3", "--delta", "0.5", "--format", "csv", "--out", csv_path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = data_rows(&csv_path);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].split(',').next_back().unwrap().split(';').count(), 8);
}

#[test]
fn optimize_writes_files_per_ansatz() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinwork(&[
        "optimize", "--model", "xx", "--ansatz", "nc", "--ansatz", "lin", "--trials", "40", "--seed", "3",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for tag in ["nc", "lin"] {
        let conv = dir.path().join(format!("convergence_{tag}.csv"));
        assert_eq!(header(&conv), "iteration,mean_W,std_W");
        assert!(!data_rows(&conv).is_empty());
        let text = fs::read_to_string(&conv).unwrap();
        assert!(text.starts_with("# command: spinwork optimize"));
        assert!(text.contains("# rng:"));
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("summary_{tag}.json"))).unwrap()).unwrap();
        assert_eq!(summary["trials"], 40);
        assert_eq!(summary["seed"], 3);
        assert!(summary["note"].is_string());
        assert!((summary["ergotropy"].as_f64().unwrap() - 3.0).abs() < 1e-9);
        let eta = summary["efficiency"].as_f64().unwrap();
        assert!(eta > 0.0 && eta <= 1.0);
    }
    let nc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary_nc.json")).unwrap()).unwrap();
    assert!((nc["final_mean"].as_f64().unwrap() - 2.25).abs() < 1e-3);
}

#[test]
fn gamma_sweep_row_count_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = spinwork(&[
        "sweep", "--model", "xy", "--n", "3", "--ansatz", "nc", "--ansatz", "lin", "--ansatz", "ata", "--axis",
        "gamma", "--from", "-1", "--to", "1", "--step", "0.25", "--trials", "4", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(header(&path), "preset,n,J,h,gamma,delta,connectivity,M,seed,ergotropy,mean_work,std_work,eta");
    let rows = data_rows(&path);
    assert_eq!(rows.len(), 9 * 3);
    let last: f64 = rows.last().unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert_eq!(last, 1.0);
}

#[test]
fn n_sweep_covers_two_through_eight() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.csv");
    let out = spinwork(&[
        "sweep", "--model", "xxx", "--ansatz", "lin", "--ansatz", "ring", "--axis", "n", "--from", "2", "--to", "8",
        "--step", "1", "--trials", "3", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&path);
    assert_eq!(rows.len(), 7 * 2);
    let ns: Vec<&str> = rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(ns[0], "2");
    assert_eq!(ns[13], "8");
}

#[test]
fn sweep_to_stdout_as_json() {
    let out = spinwork(&[
        "sweep", "--model", "xxz", "--n", "3", "--ansatz", "nc", "--axis", "delta", "--from", "-1", "--to", "0",
        "--step", "0.5", "--trials", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
}

#[test]
fn landscape_grid_and_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.csv");
    let out = spinwork(&[
        "landscape", "--model", "xx", "--ansatz", "lin", "--trajectories", "4", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(header(&path), "theta1,theta2,W,grad1,grad2");
    let rows = data_rows(&path);
    assert_eq!(rows.len(), 101 * 101);
    let best = rows
        .iter()
        .map(|r| r.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((best - 3.0).abs() < 1e-3);

    let traj = dir.path().join("l.trajectories.csv");
    assert_eq!(header(&traj), "trajectory_id,step,theta1,theta2,W");
    let ids: std::collections::BTreeSet<String> =
        data_rows(&traj).iter().map(|r| r.split(',').next().unwrap().to_owned()).collect();
    assert_eq!(ids.len(), 4);

    let out = spinwork(&["landscape", "--model", "xx", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "sweep".to_owned(), "--model".into(), "tfi".into(), "--n".into(), "3".into(), "--ansatz".into(),
            "nc".into(), "--ansatz".into(), "ring".into(), "--axis".into(), "n".into(), "--from".into(), "3".into(),
            "--to".into(), "4".into(), "--step".into(), "1".into(), "--trials".into(), "20".into(), "--seed".into(),
            "11".into(), "--out".into(), p.to_str().unwrap().to_owned(),
        ]
    };
    let run = |p: &Path| {
        let a = args(p);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(spinwork(&refs).status.success());
    };
    run(&a);
    run(&b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn validate_passes_and_negative_control_fails() {
    let ok = spinwork(&["validate"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = spinwork(&["validate", "--inject-field-sign-flip"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

fn column(path: &Path, idx: usize) -> Vec<f64> {
    data_rows(path).iter().map(|r| r.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn decoupled_chain_ergotropy_counts_flipped_spins() {
    let out = spinwork(&["ergotropy", "--model", "xx", "--n", "2", "--j", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().find(|l| l.starts_with("ergotropy")).unwrap();
    let value: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
    assert!((value - 2.0).abs() < 1e-12);
}

#[test]
fn product_landscape_peak_and_origin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nc.csv");
    let out = spinwork(&["landscape", "--model", "xx", "--ansatz", "nc", "--grid", "101", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let w = column(&path, 2);
    assert_eq!(w.len(), 10201);
    assert_eq!(w[0], 0.0);
    assert!((w.iter().copied().fold(f64::NEG_INFINITY, f64::max) - 2.25).abs() < 2e-3);
    let t1 = column(&path, 0);
    assert_eq!(t1[0], 0.0);
    assert_eq!(*t1.last().unwrap(), std::f64::consts::PI);
}

#[test]
fn entangling_trajectories_split_between_basins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lin.csv");
    let out = spinwork(&[
        "landscape", "--model", "xx", "--ansatz", "lin", "--trajectories", "4", "--seed", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = data_rows(&dir.path().join("lin.trajectories.csv"));
    let mut last = std::collections::BTreeMap::new();
    for r in &rows {
        let f: Vec<&str> = r.split(',').collect();
        last.insert(f[0].to_owned(), f[4].parse::<f64>().unwrap());
    }
    assert!(last.values().any(|&w| (w - 3.0).abs() < 1e-3), "{last:?}");
    assert!(last.values().any(|&w| w < 2.9), "{last:?}");
}

#[test]
fn single_trial_optimize_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = spinwork(&[
            "optimize", "--model", "xx", "--ansatz", "lin", "--trials", "1", "--seed", "42", "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in ["convergence_lin.csv", "summary_lin.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn entangling_optimize_mixes_basins() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinwork(&["optimize", "--model", "xx", "--ansatz", "lin", "--trials", "200", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary_lin.json")).unwrap()).unwrap();
    let mean = summary["final_mean"].as_f64().unwrap();
    assert!(mean > 2.0 && mean < 3.0, "{mean}");
}

#[test]
fn xxz_product_sweep_is_efficient_at_isotropic_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let out = spinwork(&[
        "sweep", "--model", "xxz", "--n", "4", "--ansatz", "nc", "--axis", "delta", "--from", "-1", "--to", "1",
        "--step", "0.25", "--trials", "100", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let delta = column(&path, 5);
    let eta = column(&path, 12);
    assert_eq!(delta.len(), 9);
    assert_eq!(delta[0], -1.0);
    assert!(eta[0] >= 0.99, "{}", eta[0]);
}
