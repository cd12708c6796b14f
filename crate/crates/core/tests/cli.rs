use std::path::Path;
use std::process::{Command, Output};

fn qslmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qslmq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = "\
# two curves on a coarse grid
lambda = 3
beta = 0, 1e-9
omega_start = 0
omega_stop = 10
omega_count = 21
";

#[test]
fn sweep_writes_one_csv_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = qslmq(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let text = std::fs::read_to_string(out.join("sweep_lambda3_beta0.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "omega_over_gamma,qsl_ratio,nm,p_tau,identity_residual,status"
    );
    assert_eq!(lines.count(), 21);
    assert!(out.join("sweep_lambda3_beta1e-9.csv").exists());
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        assert!(
            qslmq(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()])
                .status
                .success()
        );
    }
    for name in ["sweep_lambda3_beta0.csv", "sweep_lambda3_beta1e-9.csv"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap()
        );
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = qslmq(&[
        "trace",
        "--config",
        &cfg,
        "--beta",
        "0",
        "--omega_drive",
        "10",
        "--trace_count",
        "11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("trace_lambda3_beta0_omega10.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows[0],
        "t,re_c1,im_c1,abs_c1_sq,decoherence_rate,lamb_shift,status"
    );
    assert_eq!(rows.len(), 12);
    // C1(0) = 1
    let first: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert!((first[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn critical_reports_each_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "lambda = 3, 5\nbeta = 0\n");
    let out = dir.path().join("out");
    let o = qslmq(&["critical", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("critical.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    let oc: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(oc[0] > 5.0 && oc[0] < 5.7, "{oc:?}");
    assert!(oc[1] > oc[0]);
    assert!(rows.iter().all(|r| r[3] == "ok"));
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let cfg = write_config(dir.path(), "lambda = -1\n");
    let o = qslmq(&["sweep", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));

    let cfg = write_config(dir.path(), "lambda = 3\nfrobnicate = 2\n");
    let o = qslmq(&["sweep", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = qslmq(&["sweep", "--omega_count", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(1));

    let o = qslmq(&["trace", "--config", "/nonexistent/run.cfg", "--out", out]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fast_verify_passes() {
    let o = qslmq(&["verify", "--level", "fast"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    assert!(stdout.contains("0 failed"));
}

#[test]
fn finite_cavity_trace_uses_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = qslmq(&[
        "trace",
        "--lambda",
        "3",
        "--beta",
        "0",
        "--omega_drive",
        "5",
        "--tau0",
        "0.2",
        "--trace_horizon",
        "1",
        "--trace_count",
        "6",
        "--oracle_step",
        "2e-3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("trace_lambda3_beta0_omega5.csv")).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",ok")));
}
