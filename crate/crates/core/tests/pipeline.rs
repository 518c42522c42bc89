use std::fs;

use twisted_spin::config::SimulationConfig;
use twisted_spin::export::{parse_csv, ExportKind};
use twisted_spin::parse_config;
use twisted_spin::pipeline::{run, Command};

fn small_config() -> SimulationConfig {
    parse_config(
        r#"
dt = 1e-3
t_final = 0.5

[grid]
z_min = -12.0
z_max = 12.0
n_points = 512

[converge]
dt_coarse = 2e-3
rungs = 2
"#,
    )
    .unwrap()
}

#[test]
fn every_command_writes_its_schema() {
    let config = small_config();
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (Command::Simulate, vec![("wavefunction.csv", ExportKind::Wavefunction), ("wavefunction_t0.csv", ExportKind::Wavefunction)]),
        (Command::Texture, vec![("texture.csv", ExportKind::Texture), ("twist.csv", ExportKind::Twist)]),
        (Command::Experiment, vec![("scan.csv", ExportKind::Scan), ("clicks.csv", ExportKind::Clicks)]),
        (Command::Converge, vec![("convergence.csv", ExportKind::Convergence)]),
    ];
    for (cmd, files) in cases {
        run(&config, cmd, dir.path(), Some(3)).unwrap();
        for (name, kind) in files {
            let text = fs::read_to_string(dir.path().join(name)).unwrap();
            let table = parse_csv(&text).unwrap();
            assert_eq!(table.header.join(","), kind.header(), "{name}");
            assert!(!table.rows.is_empty(), "{name}");
            let meta: serde_json::Value =
                serde_json::from_str(&fs::read_to_string(dir.path().join(name).with_extension("meta.json")).unwrap())
                    .unwrap();
            assert_eq!(meta["columns"].as_array().unwrap().len(), kind.columns());
        }
    }
    let obs: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("observables.json")).unwrap()).unwrap();
    assert!((obs["final"]["mean_p_plus"].as_f64().unwrap() - 1.5).abs() < 1e-3);
}

#[test]
fn exported_values_round_trip() {
    let config = small_config();
    let dir = tempfile::tempdir().unwrap();
    let out = run(&config, Command::Simulate, dir.path(), None).unwrap();
    let state = out.final_state.unwrap();
    let table = parse_csv(&fs::read_to_string(dir.path().join("wavefunction.csv")).unwrap()).unwrap();
    let re = table.reals("re_minus").unwrap();
    let im = table.reals("im_minus").unwrap();
    for (k, c) in state.psi_minus().iter().enumerate() {
        assert_eq!(re[k].unwrap(), c.re);
        assert_eq!(im[k].unwrap(), c.im);
    }
    let z = table.reals("z").unwrap();
    assert!(z.windows(2).all(|w| w[0].unwrap() < w[1].unwrap()));
}

#[test]
fn texture_export_origin_row() {
    let config = small_config();
    let dir = tempfile::tempdir().unwrap();
    run(&config, Command::Texture, dir.path(), None).unwrap();
    let t = parse_csv(&fs::read_to_string(dir.path().join("texture.csv")).unwrap()).unwrap();
    let z = t.reals("z").unwrap();
    let k = z.iter().position(|z| z.unwrap() == 0.0).unwrap();
    let s: Vec<f64> = ["s1", "s2", "s3"].iter().map(|c| t.reals(c).unwrap()[k].unwrap()).collect();
    assert!((s[0] - 1.0).abs() < 1e-6 && s[1].abs() < 1e-6 && s[2].abs() < 1e-6);
    assert_eq!(t.rows[k][5], "1");
}

#[test]
fn convergence_rows_sorted() {
    let config = small_config();
    let dir = tempfile::tempdir().unwrap();
    let out = run(&config, Command::Converge, dir.path(), None).unwrap();
    assert_eq!(out.convergence.len(), 4);
    let t = parse_csv(&fs::read_to_string(dir.path().join("convergence.csv")).unwrap()).unwrap();
    let methods: Vec<&str> = t.rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(methods, ["implicit", "implicit", "spectral", "spectral"]);
}

#[test]
fn invalid_config_is_rejected_before_running() {
    let mut config = small_config();
    config.dt = -1.0;
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&config, Command::Simulate, dir.path(), None).is_err());
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}
