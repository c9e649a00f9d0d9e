//! Run configuration and the command implementations behind the `ptint` binary.

pub mod checks;
pub mod figures;
mod output;

use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bound_state::{bound_state_for, sample_wavefunction};
use crate::couplings::{CouplingFunction, Energy};
use crate::error::Error;
use crate::scattering::{transmission_sweep, ModelSpec};
use crate::sweep::{BoundRow, SweepTable, TableRow};

pub use checks::{run_checks, CheckOptions, Fault};
pub use output::write_atomic;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn render<R: TableRow>(self, table: &SweepTable<R>) -> String {
        match self {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json() + "\n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `−μδ(x)`.
    Delta,
    /// `−μδ(x) + λ₀δ′(x)`.
    Gadella,
    /// `−μδ(x) + λ₀e^{−E/E₀}δ′(x)`.
    #[default]
    EnergyDep,
    /// `−G(E)δ(x) + F(E)δ′(x)` from explicit coupling functions.
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub mu: f64,
    pub lambda0: f64,
    pub e0: Energy,
    /// δ strength for the general model; defaults to the constant `mu`.
    pub g: Option<CouplingFunction>,
    /// δ′ strength for the general model; defaults to `λ₀e^{−E/E₀}`.
    pub f: Option<CouplingFunction>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { kind: ModelKind::EnergyDep, mu: 1.0, lambda0: 1.0, e0: Energy(1.0), g: None, f: None }
    }
}

impl ModelConfig {
    pub fn to_spec(&self) -> CliResult<ModelSpec> {
        let spec = match self.kind {
            ModelKind::Delta => ModelSpec::PureDelta { mu: self.mu },
            ModelKind::Gadella => ModelSpec::ConstantDeltaPrime { mu: self.mu, lambda: self.lambda0 },
            ModelKind::EnergyDep => {
                ModelSpec::EnergyDependent { mu: self.mu, f: CouplingFunction::exponential(self.lambda0, self.e0.0)? }
            }
            ModelKind::General => ModelSpec::General {
                g: match &self.g {
                    Some(g) => g.clone(),
                    None => CouplingFunction::constant(self.mu)?,
                },
                f: match &self.f {
                    Some(f) => f.clone(),
                    None => CouplingFunction::exponential(self.lambda0, self.e0.0)?,
                },
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_lambda0(&self, lambda0: f64) -> Self {
        ModelConfig { lambda0, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl LinearGrid {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        linear_grid(self.min, self.max, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Command {
    Scatter {
        kmin: f64,
        kmax: f64,
        points: usize,
        #[serde(default)]
        log: bool,
    },
    Bound {
        #[serde(default)]
        lambda0_grid: Option<LinearGrid>,
        #[serde(default)]
        sample_x: Option<LinearGrid>,
    },
    Figure {
        index: u8,
    },
    Check {
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default)]
        fault: Option<Fault>,
    },
}

fn default_seed() -> u64 {
    CheckOptions::default().seed
}

impl Default for Command {
    fn default() -> Self {
        Command::Check { seed: default_seed(), fault: None }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub command: Command,
    /// File for tables (directory for figures); standard output when absent.
    pub output: Option<PathBuf>,
    /// Wavefunction table of the bound command; derived from `output` when absent.
    pub psi_output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        match &self.command {
            Command::Scatter { kmin, kmax, points, log } => {
                if !(kmin < kmax) {
                    return Err(CliError::Usage(format!("kmin ({kmin}) must be below kmax ({kmax})")));
                }
                if *points < 2 {
                    return Err(CliError::Usage(format!("points must be at least 2, got {points}")));
                }
                if !(*kmin > 0.0) {
                    return Err(CliError::Usage(format!("kmin must be positive, got {kmin}")));
                }
                if !kmax.is_finite() {
                    return Err(CliError::Usage("kmax must be finite".into()));
                }
                let _ = log;
            }
            Command::Bound { lambda0_grid, sample_x } => {
                for grid in [lambda0_grid, sample_x].into_iter().flatten() {
                    grid.values()?;
                }
                if lambda0_grid.is_some() && matches!(self.model.kind, ModelKind::Delta | ModelKind::General) {
                    return Err(CliError::Usage("a λ₀ grid needs the gadella or energy-dep model".into()));
                }
                if sample_x.is_some() && lambda0_grid.is_some_and(|g| g.points > 1) {
                    return Err(CliError::Usage("wavefunction samples need a single λ₀".into()));
                }
            }
            Command::Figure { index } => {
                if !(1..=4).contains(index) {
                    return Err(CliError::Usage(format!("figure index must be 1..=4, got {index}")));
                }
            }
            Command::Check { .. } => {}
        }
        Ok(())
    }
}

/// What a command produced; the process exits with status 0 only when
/// [`RunOutcome::success`] holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutcome {
    pub flagged_rows: usize,
    pub failed_checks: usize,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn success(&self) -> bool {
        self.flagged_rows == 0 && self.failed_checks == 0
    }
}

pub fn linear_grid(min: f64, max: f64, points: usize) -> CliResult<Vec<f64>> {
    if points == 1 && min == max && min.is_finite() {
        return Ok(vec![min]);
    }
    if points < 2 || !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(CliError::Usage(format!("invalid grid [{min}, {max}] with {points} points")));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points).map(|i| if i == points - 1 { max } else { min + step * i as f64 }).collect())
}

pub fn log_grid(min: f64, max: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(min > 0.0) {
        return Err(CliError::Usage(format!("logarithmic grid needs a positive start, got {min}")));
    }
    let exps = linear_grid(min.log10(), max.log10(), points)?;
    let mut out: Vec<f64> = exps.into_iter().map(|e| 10f64.powf(e)).collect();
    out[0] = min;
    *out.last_mut().expect("grid has at least two points") = max;
    Ok(out)
}

fn emit(text: &str, path: Option<&Path>, outcome: &mut RunOutcome) -> CliResult<()> {
    match path {
        Some(p) => {
            write_atomic(p, text.as_bytes())?;
            outcome.files.push(p.to_path_buf());
        }
        None => {
            use io::Write;
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> CliResult<RunOutcome> {
    cfg.validate()?;
    match cfg.command {
        Command::Scatter { .. } => run_scatter(cfg),
        Command::Bound { .. } => run_bound(cfg),
        Command::Figure { .. } => run_figure(cfg),
        Command::Check { .. } => run_check(cfg),
    }
}

pub fn run_scatter(cfg: &RunConfig) -> CliResult<RunOutcome> {
    cfg.validate()?;
    let Command::Scatter { kmin, kmax, points, log } = cfg.command else {
        return Err(CliError::Usage("run_scatter needs a scatter command".into()));
    };
    let grid = if log { log_grid(kmin, kmax, points)? } else { linear_grid(kmin, kmax, points)? };
    let table = transmission_sweep(&cfg.model.to_spec()?, &grid)?;
    let mut outcome = RunOutcome { flagged_rows: table.flagged(), ..Default::default() };
    emit(&cfg.format.render(&table), cfg.output.as_deref(), &mut outcome)?;
    Ok(outcome)
}

fn psi_path(cfg: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &cfg.psi_output {
        return Some(p.clone());
    }
    let out = cfg.output.as_ref()?;
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "bound".into());
    Some(out.with_file_name(format!("{stem}_psi.{}", cfg.format.extension())))
}

pub fn run_bound(cfg: &RunConfig) -> CliResult<RunOutcome> {
    cfg.validate()?;
    let Command::Bound { lambda0_grid, sample_x } = &cfg.command else {
        return Err(CliError::Usage("run_bound needs a bound command".into()));
    };
    let lambdas = match lambda0_grid {
        Some(g) => g.values()?,
        None => vec![cfg.model.lambda0],
    };
    let mut rows = Vec::with_capacity(lambdas.len());
    let mut states = Vec::with_capacity(lambdas.len());
    for &lambda0 in &lambdas {
        let spec = cfg.model.with_lambda0(lambda0).to_spec()?;
        let label = match &spec {
            ModelSpec::PureDelta { .. } => 0.0,
            ModelSpec::General { f, .. } => f.evaluate(0.0),
            _ => lambda0,
        };
        match bound_state_for(&spec) {
            Ok(state) => {
                rows.push(BoundRow::from_state(label, &state));
                states.push(Some(state));
            }
            Err(e) => {
                rows.push(BoundRow::failed(label, e.to_string()));
                states.push(None);
            }
        }
    }
    let table = SweepTable::new(rows);
    let mut outcome = RunOutcome { flagged_rows: table.flagged(), ..Default::default() };
    emit(&cfg.format.render(&table), cfg.output.as_deref(), &mut outcome)?;

    if let Some(grid) = sample_x {
        let xs = grid.values()?;
        if let Some(Some(state)) = states.first() {
            let psi = sample_wavefunction(state, &xs);
            let text = cfg.format.render(&psi);
            match psi_path(cfg) {
                Some(p) => emit(&text, Some(&p), &mut outcome)?,
                None => emit(&format!("\n{text}"), None, &mut outcome)?,
            }
        }
    }
    Ok(outcome)
}

pub fn run_figure(cfg: &RunConfig) -> CliResult<RunOutcome> {
    cfg.validate()?;
    let Command::Figure { index } = cfg.command else {
        return Err(CliError::Usage("run_figure needs a figure command".into()));
    };
    let figure = figures::figure_data(index)?;
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from(format!("figure{index}")));
    let files = figures::write_figure(&figure, &dir, cfg.format)?;
    Ok(RunOutcome { flagged_rows: figure.flagged(), failed_checks: 0, files })
}

pub fn run_check(cfg: &RunConfig) -> CliResult<RunOutcome> {
    let Command::Check { seed, fault } = cfg.command else {
        return Err(CliError::Usage("run_check needs a check command".into()));
    };
    let reports = run_checks(&CheckOptions { seed, fault });
    let failed = reports.iter().filter(|r| !r.passed).count();
    let mut outcome = RunOutcome { failed_checks: failed, ..Default::default() };
    let text = serde_json::to_string_pretty(&reports)? + "\n";
    emit(&text, cfg.output.as_deref(), &mut outcome)?;
    Ok(outcome)
}
