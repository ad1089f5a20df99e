use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hetnet::cli::{self, SimOptions, SweepMetric, SweepVariable, TauGrid};
use hetnet::model::db_to_linear;
use hetnet::{Error, NetworkConfig, QuadratureSettings};

/// Downlink SINR analysis and simulation for K-tier heterogeneous networks.
#[derive(Parser)]
#[command(name = "hetnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Network configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance of every numerical integral.
    #[arg(long, default_value_t = 1e-9)]
    quad_rel_tol: f64,
}

#[derive(Args)]
struct Grid {
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    tau_min_db: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    tau_max_db: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 31)]
    tau_steps: usize,
}

#[derive(Args)]
struct Sim {
    #[arg(long, default_value_t = 10_000)]
    replications: usize,
    #[arg(long, env = "HETNET_SEED", default_value_t = 1)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Fading draws per spatial realization.
    #[arg(long, default_value_t = 1)]
    draws: usize,
    /// Simulation disc radius in meters (default: smallest radius passing the window rule).
    #[arg(long)]
    window_radius: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Bias,
    Density,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricKind {
    Rate,
    Throughput,
    Outage,
}

#[derive(Subcommand)]
enum Command {
    /// Per-tier and network outage over an SINR threshold grid.
    Outage {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Ergodic rates, cell loads and minimum user throughput, or a sweep of them.
    Rate {
        #[command(flatten)]
        common: Common,
        /// Sweep one tier's bias (dB) or density (multiple of tier 1's).
        #[arg(long, value_enum)]
        sweep: Option<SweepKind>,
        #[arg(long, default_value_t = 2)]
        sweep_tier: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        sweep_min: f64,
        #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
        sweep_max: f64,
        #[arg(long, default_value_t = 11)]
        sweep_steps: usize,
        /// Metric reported by a sweep.
        #[arg(long, value_enum, default_value = "throughput")]
        metric: MetricKind,
        /// Threshold for outage sweeps.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        tau_db: f64,
    },
    /// Association probabilities and cell loads.
    Assoc {
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo campaign with analytic and empirical outage columns.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        sim: Sim,
        /// Also write raw samples (tier, sinr, distance, rate) here.
        #[arg(long)]
        samples_out: Option<PathBuf>,
        /// Replications that also measure cell load with a user point process.
        #[arg(long, default_value_t = 0)]
        load_replications: usize,
    },
    /// Check analytic results against simulation; exits 1 on FAIL.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        sim: Sim,
        /// Simulate this configuration instead (negative control).
        #[arg(long)]
        sim_config: Option<PathBuf>,
    },
}

fn settings(common: &Common) -> Result<QuadratureSettings, Error> {
    QuadratureSettings::default().with_rel_tol(common.quad_rel_tol).validate()
}

fn grid(g: &Grid) -> TauGrid {
    TauGrid {
        min_db: g.tau_min_db,
        max_db: g.tau_max_db,
        steps: g.tau_steps,
    }
}

fn sim_options(s: &Sim) -> SimOptions {
    SimOptions {
        threads: s.threads,
        draws_per_realization: s.draws,
        window_radius: s.window_radius,
        ..SimOptions::new(s.replications, s.seed)
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Outage { common, grid: g } => {
            let config = NetworkConfig::from_file(&common.config)?;
            let curve = cli::cmd_outage(&config, &grid(&g), &settings(&common)?)?;
            emit(&common, &curve.to_csv())?;
        }
        Command::Rate {
            common,
            sweep,
            sweep_tier,
            sweep_min,
            sweep_max,
            sweep_steps,
            metric,
            tau_db,
        } => {
            let config = NetworkConfig::from_file(&common.config)?;
            let q = settings(&common)?;
            match sweep {
                None => emit(&common, &cli::cmd_rate(&config, &q)?.to_csv())?,
                Some(kind) => {
                    let values = TauGrid {
                        min_db: sweep_min,
                        max_db: sweep_max,
                        steps: sweep_steps,
                    }
                    .values_db()?;
                    let variable = match kind {
                        SweepKind::Bias => SweepVariable::BiasDb { tier: sweep_tier },
                        SweepKind::Density => SweepVariable::DensityRatio { tier: sweep_tier },
                    };
                    let metric = match metric {
                        MetricKind::Rate => SweepMetric::ErgodicRate,
                        MetricKind::Throughput => SweepMetric::UserThroughput,
                        MetricKind::Outage => SweepMetric::Outage {
                            tau: db_to_linear(tau_db),
                        },
                    };
                    let curve = cli::sweep(&config, variable, &values, metric, &q)?;
                    emit(&common, &curve.to_csv())?;
                }
            }
        }
        Command::Assoc { common } => {
            let config = NetworkConfig::from_file(&common.config)?;
            emit(&common, &cli::cmd_assoc(&config, &settings(&common)?)?.to_csv())?;
        }
        Command::Simulate {
            common,
            grid: g,
            sim,
            samples_out,
            load_replications,
        } => {
            let config = NetworkConfig::from_file(&common.config)?;
            let opts = SimOptions {
                load_replications,
                ..sim_options(&sim)
            };
            let out = cli::cmd_simulate(&config, &opts, &grid(&g), &settings(&common)?)?;
            emit(&common, &out.curve.to_csv())?;
            if let Some(path) = samples_out {
                let file = std::io::BufWriter::new(std::fs::File::create(path)?);
                out.campaign.sinr.write_csv(file)?;
            }
            eprint!("{}", out.summary);
        }
        Command::Compare {
            common,
            grid: g,
            sim,
            sim_config,
        } => {
            let config = NetworkConfig::from_file(&common.config)?;
            let simulated = match &sim_config {
                Some(path) => NetworkConfig::from_file(path)?,
                None => config.clone(),
            };
            let report = cli::cmd_compare(&config, &simulated, &sim_options(&sim), &grid(&g), &settings(&common)?)?;
            emit(&common, &report.to_text())?;
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
