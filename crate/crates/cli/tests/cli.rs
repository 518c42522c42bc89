use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = "dt = 1e-3\nt_final = 0.25\n\n[grid]\nz_min = -12.0\nz_max = 12.0\nn_points = 512\n";

fn twisted_spin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twisted-spin")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn simulate_writes_exports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = twisted_spin(&["simulate", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["wavefunction.csv", "wavefunction.meta.json", "wavefunction_t0.csv", "observables.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = twisted_spin(&["experiment", "--config", &cfg, "--seed", "5", "--out-dir", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["scan.csv", "scan.meta.json", "clicks.csv", "clicks.meta.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = twisted_spin(&[
        "simulate", "--config", &cfg, "--out-dir", out.to_str().unwrap(),
        "--method", "implicit", "--gradient", "-2", "--t-final", "0.5", "--dt", "5e-3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta = fs::read_to_string(out.join("wavefunction.meta.json")).unwrap();
    assert!(meta.contains("\"method\": \"implicit\""));
    assert!(meta.contains("\"gradient\": -2.0"));
    assert!(meta.contains("\"time\": 0.5"));
}

#[test]
fn bad_config_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t_final = 1.0\ndt = -1.0\n");
    let o = twisted_spin(&["simulate", "--config", &cfg, "--out-dir", dir.path().join("o").to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("`dt`"), "{err}");
}

#[test]
fn bad_override_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = twisted_spin(&["simulate", "--dt", "0.3", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("t_final"));
}

#[test]
fn converge_prints_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{SMALL}\n[converge]\ndt_coarse = 5e-3\nrungs = 3\nmethods = [\"spectral\"]\n"),
    );
    let o = twisted_spin(&["converge", "--config", &cfg, "--out-dir", dir.path().join("o").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("spectral: error ratios"), "{stdout}");
}
