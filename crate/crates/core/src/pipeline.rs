//! End-to-end runs behind the command-line subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::SimulationConfig;
use crate::convergence::{Ladder, ConvergenceRow};
use crate::error::Result;
use crate::experiment::{aperture_postselect, sample_clicks, scan_hole};
use crate::export::{self, ClickRow, ExportKind};
use crate::field::{initial_state, observables, Observables, SpinorField};
use crate::integrator::evolve;
use crate::texture::{texture, twist_profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Texture,
    Experiment,
    Converge,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub final_state: Option<SpinorField>,
    pub convergence: Vec<ConvergenceRow>,
}

#[derive(Serialize)]
struct ObservablesSummary<'a> {
    initial: Observables,
    final_: Observables,
    steps_taken: usize,
    final_time: f64,
    max_norm_drift: f64,
    config: &'a SimulationConfig,
}

/// Evolves the configured initial state and writes the wavefunction exports.
fn simulate(config: &SimulationConfig, out_dir: &Path, out: &mut RunOutput) -> Result<SpinorField> {
    let grid = config.build_grid()?;
    let initial = initial_state(&grid);
    let (state, report) = evolve(&initial, config.t_final, config.dt, config.gradient, config.method)?;

    out.files.extend(export::write_export(
        &out_dir.join(&config.output.initial_wavefunction),
        ExportKind::Wavefunction,
        &export::wavefunction_csv(&initial)?,
        0.0,
        config,
    )?);
    out.files.extend(export::write_export(
        &out_dir.join(&config.output.wavefunction),
        ExportKind::Wavefunction,
        &export::wavefunction_csv(&state)?,
        state.time(),
        config,
    )?);

    let summary = ObservablesSummary {
        initial: observables(&initial, config.gradient)?,
        final_: observables(&state, config.gradient)?,
        steps_taken: report.steps_taken,
        final_time: report.final_time,
        max_norm_drift: report.max_norm_drift,
        config,
    };
    let path = out_dir.join(&config.output.observables);
    let mut json = serde_json::to_string_pretty(&summary)?.replace("\"final_\"", "\"final\"");
    json.push('\n');
    fs::write(&path, json)?;
    out.files.push(path);
    Ok(state)
}

fn write_texture(config: &SimulationConfig, state: &SpinorField, out_dir: &Path, out: &mut RunOutput) -> Result<()> {
    let samples = texture(state, config.epsilon)?;
    out.files.extend(export::write_export(
        &out_dir.join(&config.output.texture),
        ExportKind::Texture,
        &export::texture_csv(&samples)?,
        state.time(),
        config,
    )?);
    let profile = twist_profile(&samples)?;
    out.files.extend(export::write_export(
        &out_dir.join(&config.output.twist),
        ExportKind::Twist,
        &export::twist_csv(&profile)?,
        state.time(),
        config,
    )?);
    Ok(())
}

const AXES: [(&str, [f64; 3]); 3] = [("1", [1.0, 0.0, 0.0]), ("2", [0.0, 1.0, 0.0]), ("3", [0.0, 0.0, 1.0])];

fn write_experiment(
    config: &SimulationConfig,
    state: &SpinorField,
    seed: Option<u64>,
    out_dir: &Path,
    out: &mut RunOutput,
) -> Result<()> {
    let x = &config.experiment;
    let centers = x.centers();
    let rows = scan_hole(state, &centers, x.half_width)?;
    out.files.extend(export::write_export(
        &out_dir.join(&config.output.scan),
        ExportKind::Scan,
        &export::scan_csv(&rows)?,
        state.time(),
        config,
    )?);
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut clicks = Vec::new();
        let mut sorted = centers.clone();
        sorted.sort_by(f64::total_cmp);
        for z in sorted {
            let Ok(cond) = aperture_postselect(state, z, x.half_width) else {
                continue;
            };
            for (name, axis) in AXES {
                let c = sample_clicks(&cond, &axis, x.shots, &mut rng)?;
                clicks.push(ClickRow {
                    z_center: z,
                    axis: name,
                    up: c.up,
                    down: c.down,
                });
            }
        }
        out.files.extend(export::write_export(
            &out_dir.join(&config.output.clicks),
            ExportKind::Clicks,
            &export::clicks_csv(&clicks),
            state.time(),
            &serde_json::json!({ "seed": seed, "config": config }),
        )?);
    }
    Ok(())
}

/// Runs one subcommand, writing its exports under `out_dir`.
///
/// `seed` enables the click sampler of the experiment command.
pub fn run(config: &SimulationConfig, command: Command, out_dir: &Path, seed: Option<u64>) -> Result<RunOutput> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let mut out = RunOutput::default();
    match command {
        Command::Simulate => {
            out.final_state = Some(simulate(config, out_dir, &mut out)?);
        }
        Command::Texture => {
            let state = simulate(config, out_dir, &mut out)?;
            write_texture(config, &state, out_dir, &mut out)?;
            out.final_state = Some(state);
        }
        Command::Experiment => {
            let grid = config.build_grid()?;
            let (state, _) = evolve(&initial_state(&grid), config.t_final, config.dt, config.gradient, config.method)?;
            write_experiment(config, &state, seed, out_dir, &mut out)?;
            out.final_state = Some(state);
        }
        Command::Converge => {
            let ladder = Ladder {
                base_grid: config.build_grid()?,
                t_final: config.t_final,
                g: config.gradient,
                dt_coarse: config.converge.dt_coarse,
                rungs: config.converge.rungs,
            };
            let rows = ladder.run(&config.converge.methods)?;
            out.files.extend(export::write_export(
                &out_dir.join(&config.output.convergence),
                ExportKind::Convergence,
                &export::convergence_csv(&rows)?,
                config.t_final,
                config,
            )?);
            out.convergence = rows;
        }
    }
    Ok(out)
}
