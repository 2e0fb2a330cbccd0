use std::path::Path;
use std::process::{Command, Output};

fn sirtail(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sirtail"));
    cmd.args(args).env_remove("SIRTAIL_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{}: {e}", dir.join(name).display()))
}

fn run_with_threads(args: &[&str], threads: &str, dir: &Path) {
    let mut all = args.to_vec();
    all.extend(["--threads", threads, "--out", dir.to_str().unwrap()]);
    let out = sirtail(&all, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let cases: [(&[&str], &[&str]); 4] = [
        (&["tail", "--seed", "7", "--samples", "30000", "--points", "100"], &["tail.csv", "tail.json"]),
        (
            &["constant", "--model", "ginibre", "--fading", "nakagami:1", "--method", "both", "--seed", "7", "--samples", "20000"],
            &["constant.json"],
        ),
        (&["bounds", "--model", "poisson:2", "--seed", "7", "--samples", "20000"], &["bounds.csv", "bounds.json"]),
        (
            &["counterexample", "--a", "1.5", "--seed", "7", "--n-max", "10000", "--sequences", "3", "--identity-samples", "20000"],
            &["counterexample.csv", "counterexample.json"],
        ),
    ];
    for (args, files) in cases {
        let one = tempfile::tempdir().unwrap();
        let eight = tempfile::tempdir().unwrap();
        run_with_threads(args, "1", one.path());
        run_with_threads(args, "8", eight.path());
        for f in files {
            assert_eq!(read(one.path(), f), read(eight.path(), f), "{} differs", f);
        }
    }
}

#[test]
fn tail_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    run_with_threads(&["tail", "--model", "poisson:1.0", "--fading", "rayleigh", "--beta", "2", "--seed", "7", "--samples", "20000"], "2", dir.path());
    let csv = String::from_utf8(read(dir.path(), "tail.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,p_hat,ci_low,ci_high,scaled"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        assert!(cols[2] <= cols[1] && cols[1] <= cols[3]);
    }
}

#[test]
fn constant_reports_both_methods_and_gap() {
    let dir = tempfile::tempdir().unwrap();
    run_with_threads(
        &["constant", "--model", "ginibre", "--fading", "nakagami:1", "--beta", "2", "--method", "both", "--seed", "7", "--samples", "50000"],
        "1",
        dir.path(),
    );
    let doc: serde_json::Value = serde_json::from_slice(&read(dir.path(), "constant.json")).unwrap();
    let est = doc["estimates"].as_array().unwrap();
    assert_eq!(est[0]["method"], "quadrature");
    assert_eq!(est[1]["method"], "palm-mc");
    assert!(doc["gap_z"].as_f64().unwrap() <= 3.0);
}

#[test]
fn counterexample_reports_divergence() {
    let dir = tempfile::tempdir().unwrap();
    run_with_threads(&["counterexample", "--a", "1.5", "--seed", "7", "--identity-samples", "100000"], "1", dir.path());
    let doc: serde_json::Value = serde_json::from_slice(&read(dir.path(), "counterexample.json")).unwrap();
    let ns: Vec<u64> = doc["report"]["checkpoints"].as_array().unwrap().iter().map(|c| c["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [1000, 10_000, 100_000]);
    assert!(doc["report"]["analytic"].as_str().unwrap().starts_with("E⁰[R(o)²] = ∞"));
    assert_eq!(doc["report"]["verdict"], "diverging");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 3\nsamples = 5000\npoints = 50\ntheta_points = 4\nbeta = 3.0\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = sirtail(
        &["tail", "--config", cfg.to_str().unwrap(), "--beta", "2.5", "--out", out_dir.to_str().unwrap()],
        &[("SIRTAIL_THREADS", "2")],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&read(&out_dir, "tail.json")).unwrap();
    assert_eq!(doc["config"]["beta"].as_f64(), Some(2.5));
    assert_eq!(doc["config"]["seed"].as_u64(), Some(3));
    assert_eq!(doc["curve"]["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // missing seed
    assert_eq!(sirtail(&["tail", "--out", out], &[]).status.code(), Some(2));
    // unknown model and unsupported model
    assert_eq!(sirtail(&["tail", "--seed", "1", "--model", "hexagonal", "--out", out], &[]).status.code(), Some(2));
    assert_eq!(sirtail(&["constant", "--seed", "1", "--model", "lattice:1.5", "--out", out], &[]).status.code(), Some(2));
    // β too close to 1 for truncated Monte Carlo
    let o = sirtail(&["tail", "--seed", "1", "--beta", "1.02", "--samples", "10", "--out", out], &[]);
    assert_eq!(o.status.code(), Some(2));
    // typo in a config file, reported with its line
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "seed = 1\nbetta = 2\n").unwrap();
    let o = sirtail(&["tail", "--config", cfg.to_str().unwrap(), "--out", out], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("betta"), "{err}");
    // quadrature cannot meet the requested tolerance
    let o = sirtail(
        &["constant", "--seed", "1", "--model", "ginibre", "--method", "quadrature", "--panel-order", "8", "--abs-tol", "1e-15", "--rel-tol", "1e-15", "--out", out],
        &[],
    );
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}
