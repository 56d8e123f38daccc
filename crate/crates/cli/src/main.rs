//! Command-line runner for the aerial-interference experiments.

mod config;
mod error;
mod output;
mod presets;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use aerial_interference::antenna::{field_pattern_y, field_pattern_z};
use aerial_interference::geometry::{fit_rayleigh_b, sample_r_hat, TopologyConfig};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use config::{FileConfig, FlagOverrides, Format, Preset};
use error::CliError;
use output::{Cell, Metadata, Table};

/// Output directory used when `--out` is not given.
const OUT_ENV: &str = "AERIAL_INTERFERENCE_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "aerial-interference",
    version,
    about = "Interference experiments for mixed ground/aerial IoT links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment preset and write its tables.
    ///
    /// Preset names follow figure content; fig7-gain-multipair and
    /// fig7-rate-standalone are two different figures that share a number.
    Run(RunArgs),
    /// Print field-pattern samples of one dipole as CSV.
    Pattern {
        #[arg(long, value_enum)]
        antenna: AntennaArg,
        /// Samples per angular axis.
        #[arg(long, default_value_t = 91)]
        grid: usize,
    },
    /// Fit the Rayleigh scale of the Tx-Rx ground separation.
    FitB {
        #[arg(long, default_value_t = 10.0)]
        m0: f64,
        #[arg(long = "mmax", default_value_t = 100.0)]
        m_max: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    preset: Preset,
    /// JSON file with overrides of the preset defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per sweep point (histogram samples for the distribution presets).
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, env = OUT_ENV, default_value = "results")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AntennaArg {
    Z,
    Y,
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let started_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let file = match &args.config {
        Some(path) => FileConfig::parse(&std::fs::read(path).map_err(|e| CliError::io(path, e))?)?,
        None => FileConfig::default(),
    };
    let flags = FlagOverrides {
        seed: args.seed,
        trials: args.trials,
        threads: args.threads,
    };
    let spec = config::resolve(args.preset, &file, &flags, args.format, args.out)?;
    let tables = presets::run(&spec)?;
    let written = output::write_tables(&spec, &tables)?;
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: concat!("v", env!("CARGO_PKG_VERSION")),
        preset: spec.preset.name(),
        seed: spec.seed,
        config: &spec,
        rayleigh_b: spec.topology.rayleigh_b(),
        outputs: written.iter().map(|p| p.display().to_string()).collect(),
        started_unix_s,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let meta_path = output::write_metadata(&spec, &meta)?;
    for p in written.iter().chain([&meta_path]) {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn pattern(antenna: AntennaArg, grid: usize) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Config(format!(
            "`grid` must be in 2.., got {grid}"
        )));
    }
    let step = |i: usize, span: f64| span * i as f64 / (grid - 1) as f64;
    let mut t = match antenna {
        AntennaArg::Z => Table::new("pattern", &["theta", "field", "gain"]),
        AntennaArg::Y => Table::new("pattern", &["theta", "phi", "field", "gain"]),
    };
    for i in 0..grid {
        let theta = step(i, std::f64::consts::PI);
        match antenna {
            AntennaArg::Z => {
                let f = field_pattern_z(theta);
                t.push(vec![theta.into(), f.into(), (f * f).into()]);
            }
            AntennaArg::Y => {
                for j in 0..grid {
                    let phi = step(j, std::f64::consts::TAU);
                    let f = field_pattern_y(theta, phi);
                    t.push(vec![theta.into(), phi.into(), f.into(), (f * f).into()]);
                }
            }
        }
    }
    let bytes = output::to_csv(&t).map_err(|e| CliError::io("<stdout>", e))?;
    std::io::stdout()
        .write_all(&bytes)
        .map_err(|e| CliError::io("<stdout>", e))
}

fn fit_b(m0: f64, m_max: f64, samples: usize, seed: u64) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Config("`samples` must be in 1.., got 0".into()));
    }
    let config =
        TopologyConfig::new(m0, m_max, 100.0, 1, 0).map_err(|e| CliError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = fit_rayleigh_b(&sample_r_hat(&config, samples, &mut rng))?;
    let mut t = Table::new("fit", &["m0", "m_max", "samples", "seed", "b"]);
    t.push(vec![
        m0.into(),
        m_max.into(),
        samples.into(),
        Cell::Int(seed),
        b.into(),
    ]);
    let bytes = output::to_csv(&t).map_err(|e| CliError::io("<stdout>", e))?;
    std::io::stdout()
        .write_all(&bytes)
        .map_err(|e| CliError::io("<stdout>", e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Pattern { antenna, grid } => pattern(antenna, grid),
        Command::FitB {
            m0,
            m_max,
            samples,
            seed,
        } => fit_b(m0, m_max, samples, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
