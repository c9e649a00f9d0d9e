use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use point_interactions::cli::{self, Command, Fault, Format, LinearGrid, ModelKind, RunConfig};
use point_interactions::couplings::{parse_energy, CouplingFunction, Energy};

/// Scattering data, bound states and self-checks for δ–δ′ point interactions.
#[derive(Debug, Parser)]
#[command(name = "ptint", version)]
struct Cli {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    model: ModelArgs,

    /// Output file (directory for `figure`); standard output when absent.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, global = true, value_enum)]
    model: Option<KindArg>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda0: Option<f64>,
    /// Coupling energy scale, or `inf`.
    #[arg(long, global = true, value_parser = parse_energy, conflicts_with = "k0")]
    e0: Option<f64>,
    /// Wavenumber scale `√(2E₀)`, or `inf`.
    #[arg(long, global = true, value_parser = parse_energy)]
    k0: Option<f64>,
    /// δ strength of the general model as JSON, e.g. `{"type":"constant","value":1}`.
    #[arg(long, global = true, value_parser = coupling_arg)]
    g: Option<CouplingFunction>,
    /// δ′ strength of the general model as JSON.
    #[arg(long, global = true, value_parser = coupling_arg)]
    f: Option<CouplingFunction>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Delta,
    Gadella,
    EnergyDep,
    General,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Reflection and transmission over a wavenumber grid.
    Scatter {
        #[arg(long, default_value_t = 0.01)]
        kmin: f64,
        #[arg(long, default_value_t = 10.0)]
        kmax: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
    },
    /// Bound states, optionally over a λ₀ grid and with wavefunction samples.
    Bound {
        #[arg(long, allow_negative_numbers = true, requires_all = ["lambda0_max", "lambda0_points"])]
        lambda0_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lambda0_max: Option<f64>,
        #[arg(long)]
        lambda0_points: Option<usize>,
        #[arg(long, allow_negative_numbers = true, requires_all = ["x_max", "x_points"])]
        x_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        #[arg(long)]
        x_points: Option<usize>,
        /// Wavefunction table; defaults to `<out stem>_psi.<ext>`.
        #[arg(long)]
        psi_out: Option<PathBuf>,
    },
    /// Plot-ready data for one of the four reference figures.
    Figure {
        #[arg(long = "figure", value_name = "N")]
        index: u8,
    },
    /// Randomized invariant and oracle checks, reported as JSON.
    Check {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, hide = true, value_parser = fault_arg)]
        inject_fault: Option<Fault>,
    },
}

fn coupling_arg(s: &str) -> std::result::Result<CouplingFunction, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn fault_arg(s: &str) -> std::result::Result<Fault, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn grid(min: Option<f64>, max: Option<f64>, points: Option<usize>) -> Option<LinearGrid> {
    Some(LinearGrid { min: min?, max: max?, points: points? })
}

fn build_config(args: Cli) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_json_file(path).with_context(|| format!("reading {}", path.display()))?,
        None => RunConfig::default(),
    };
    let m = args.model;
    if let Some(kind) = m.model {
        cfg.model.kind = match kind {
            KindArg::Delta => ModelKind::Delta,
            KindArg::Gadella => ModelKind::Gadella,
            KindArg::EnergyDep => ModelKind::EnergyDep,
            KindArg::General => ModelKind::General,
        };
    }
    if let Some(mu) = m.mu {
        cfg.model.mu = mu;
    }
    if let Some(l) = m.lambda0 {
        cfg.model.lambda0 = l;
    }
    if let Some(e0) = m.e0 {
        cfg.model.e0 = Energy(e0);
    }
    if let Some(k0) = m.k0 {
        cfg.model.e0 = Energy(0.5 * k0 * k0);
    }
    if m.g.is_some() {
        cfg.model.g = m.g;
    }
    if m.f.is_some() {
        cfg.model.f = m.f;
    }
    if args.out.is_some() {
        cfg.output = args.out;
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    match args.command {
        Some(Sub::Scatter { kmin, kmax, points, log }) => cfg.command = Command::Scatter { kmin, kmax, points, log },
        Some(Sub::Bound { lambda0_min, lambda0_max, lambda0_points, x_min, x_max, x_points, psi_out }) => {
            cfg.command = Command::Bound {
                lambda0_grid: grid(lambda0_min, lambda0_max, lambda0_points),
                sample_x: grid(x_min, x_max, x_points),
            };
            if psi_out.is_some() {
                cfg.psi_output = psi_out;
            }
        }
        Some(Sub::Figure { index }) => cfg.command = Command::Figure { index },
        Some(Sub::Check { seed, inject_fault }) => {
            let (default_seed, default_fault) = match cfg.command {
                Command::Check { seed, fault } => (seed, fault),
                _ => (cli::CheckOptions::default().seed, None),
            };
            cfg.command = Command::Check { seed: seed.unwrap_or(default_seed), fault: inject_fault.or(default_fault) };
        }
        None if args.config.is_none() => anyhow::bail!("no command given; see --help"),
        None => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let outcome = build_config(args).and_then(|cfg| Ok(cli::run(&cfg)?));
    match outcome {
        Ok(o) if o.success() => ExitCode::SUCCESS,
        Ok(o) => {
            if o.flagged_rows > 0 {
                eprintln!("ptint: {} row(s) flagged with errors", o.flagged_rows);
            }
            if o.failed_checks > 0 {
                eprintln!("ptint: {} check(s) failed", o.failed_checks);
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("ptint: {e:#}");
            ExitCode::from(2)
        }
    }
}
