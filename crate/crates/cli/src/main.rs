use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use twisted_spin::config::{parse_config, SimulationConfig};
use twisted_spin::convergence::successive_ratios;
use twisted_spin::pipeline::{run, Command};
use twisted_spin::Method;

/// Spin-1/2 wavepacket in a gradient magnetic field: simulate, extract the
/// position-dependent spin direction, and post-select through an aperture.
#[derive(Parser, Debug)]
#[command(name = "twisted-spin", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// TOML run configuration; omitted keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for CSV exports and their metadata sidecars.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Integrator: spectral or implicit.
    #[arg(long, global = true)]
    method: Option<Method>,

    #[arg(long, global = true)]
    dt: Option<f64>,

    #[arg(long, global = true)]
    t_final: Option<f64>,

    /// Gradient coefficient g of the potential ∓ g z.
    #[arg(long, global = true, allow_negative_numbers = true)]
    gradient: Option<f64>,

    /// Seed for the analyzer click sampler (experiment only).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Evolve the initial state and export the wavefunction at t = 0 and t_final.
    Simulate,
    /// As simulate, plus the spin texture and its helix profile.
    Texture,
    /// Scan an aperture across the packet and export the conditional spin states.
    Experiment,
    /// Error against the exact solution on a dt (and dz) refinement ladder.
    Converge,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Simulate => Command::Simulate,
            Cmd::Texture => Command::Texture,
            Cmd::Experiment => Command::Experiment,
            Cmd::Converge => Command::Converge,
        }
    }
}

fn load_config(cli: &Cli) -> Result<SimulationConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("invalid config {}", path.display()))?
        }
        None => SimulationConfig::default(),
    };
    if let Some(m) = cli.method {
        config.method = m;
    }
    if let Some(dt) = cli.dt {
        config.dt = dt;
    }
    if let Some(t) = cli.t_final {
        config.t_final = t;
    }
    if let Some(g) = cli.gradient {
        config.gradient = g;
    }
    config.validate().context("invalid command-line override")?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match run(&config, cli.command.into(), &cli.out_dir, cli.seed) {
        Ok(out) => {
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            for m in &config.converge.methods {
                let ratios = successive_ratios(&out.convergence, *m);
                if !ratios.is_empty() {
                    let text: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
                    println!("{m}: error ratios {}", text.join(", "));
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
