//! Plot-ready data for the four reference figures: transmission versus `k`,
//! bound energy versus `λ₀`, and two families of bound wavefunctions.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::{linear_grid, write_atomic, CliError, CliResult, Format};
use crate::bound_state::{bound_state, energy_sweep, half_line_lambda0, sample_wavefunction, HalfLine};
use crate::couplings::CouplingFunction;
use crate::scattering::{transmission_sweep, ModelSpec};
use crate::sweep::{BoundRow, ScatterRow, SweepTable, WavefunctionRow};

pub const FIG1_K0: [f64; 4] = [f64::INFINITY, 4.0, 2.0, 1.0];
pub const FIG2_MU: [f64; 3] = [0.5, 1.0, 1.5];
pub const FIG2_E0: [f64; 2] = [f64::INFINITY, 1.0];
pub const FIG3_E0: [f64; 4] = [f64::INFINITY, 4.0, 1.0, 0.25];
pub const FIG4_E0: [f64; 4] = [f64::INFINITY, 2.0, 1.0, 0.5];

#[derive(Debug, Clone, PartialEq)]
pub enum CurveTable {
    Scatter(SweepTable<ScatterRow>),
    Bound(SweepTable<BoundRow>),
    Wavefunction(SweepTable<WavefunctionRow>),
}

impl CurveTable {
    fn flagged(&self) -> usize {
        match self {
            CurveTable::Scatter(t) => t.flagged(),
            CurveTable::Bound(t) => t.flagged(),
            CurveTable::Wavefunction(t) => t.flagged(),
        }
    }

    fn render(&self, format: Format) -> String {
        match self {
            CurveTable::Scatter(t) => format.render(t),
            CurveTable::Bound(t) => format.render(t),
            CurveTable::Wavefunction(t) => format.render(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub params: serde_json::Value,
    pub table: CurveTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub index: u8,
    pub title: &'static str,
    pub x: &'static str,
    pub y: &'static str,
    pub curves: Vec<Curve>,
}

impl Figure {
    pub fn flagged(&self) -> usize {
        self.curves.iter().map(|c| c.table.flagged()).sum()
    }
}

#[derive(Serialize)]
struct ManifestCurve<'a> {
    label: &'a str,
    file: String,
    params: &'a serde_json::Value,
}

#[derive(Serialize)]
struct Manifest<'a> {
    figure: u8,
    title: &'a str,
    x: &'a str,
    y: &'a str,
    format: Format,
    curves: Vec<ManifestCurve<'a>>,
}

fn fmt_scale(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

fn scale_json(v: f64) -> serde_json::Value {
    if v.is_infinite() {
        json!("inf")
    } else {
        json!(v)
    }
}

pub fn figure_data(index: u8) -> CliResult<Figure> {
    match index {
        1 => transmission_figure(),
        2 => energy_figure(),
        3 => wavefunction_figure(),
        4 => half_line_figure(),
        _ => Err(CliError::Usage(format!("figure index must be 1..=4, got {index}"))),
    }
}

/// `|s|²` against `k` for `μ = λ₀ = 1` and several `k₀ = √(2E₀)`.
fn transmission_figure() -> CliResult<Figure> {
    let grid = linear_grid(0.01, 10.0, 1000)?;
    let curves = FIG1_K0
        .iter()
        .map(|&k0| {
            let e0 = 0.5 * k0 * k0;
            let model = ModelSpec::EnergyDependent { mu: 1.0, f: CouplingFunction::exponential(1.0, e0)? };
            Ok(Curve {
                label: format!("k0={}", fmt_scale(k0)),
                params: json!({"mu": 1.0, "lambda0": 1.0, "k0": scale_json(k0), "e0": scale_json(e0)}),
                table: CurveTable::Scatter(transmission_sweep(&model, &grid)?),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Figure { index: 1, title: "transmission versus wavenumber", x: "k", y: "abs_s2", curves })
}

/// Bound energy against `λ₀ ∈ [−3, 3]`.
fn energy_figure() -> CliResult<Figure> {
    let grid = linear_grid(-3.0, 3.0, 601)?;
    let mut curves = Vec::new();
    for &mu in &FIG2_MU {
        for &e0 in &FIG2_E0 {
            curves.push(Curve {
                label: format!("mu={mu},e0={}", fmt_scale(e0)),
                params: json!({"mu": mu, "e0": scale_json(e0)}),
                table: CurveTable::Bound(energy_sweep(mu, e0, &grid)?),
            });
        }
    }
    Ok(Figure { index: 2, title: "bound energy versus lambda0", x: "lambda0", y: "E", curves })
}

fn wavefunction_curves(mu: f64, pairs: &[(f64, f64)], xs: &[f64]) -> CliResult<Vec<Curve>> {
    pairs
        .iter()
        .map(|&(e0, lambda0)| {
            let state = bound_state(mu, &CouplingFunction::exponential(lambda0, e0)?)?;
            Ok(Curve {
                label: format!("e0={}", fmt_scale(e0)),
                params: json!({
                    "mu": mu,
                    "lambda0": lambda0,
                    "e0": scale_json(e0),
                    "E": state.energy,
                    "kappa": state.kappa,
                    "lambda_E": state.lambda_e,
                    "A": state.a,
                    "B": state.b,
                }),
                table: CurveTable::Wavefunction(sample_wavefunction(&state, xs)),
            })
        })
        .collect()
}

/// `ψ(x)` for `μ = 1`, `λ₀ = 2`.
fn wavefunction_figure() -> CliResult<Figure> {
    let xs = linear_grid(-20.0, 20.0, 801)?;
    let pairs: Vec<(f64, f64)> = FIG3_E0.iter().map(|&e0| (e0, 2.0)).collect();
    let curves = wavefunction_curves(1.0, &pairs, &xs)?;
    Ok(Figure { index: 3, title: "bound wavefunction, mu=1, lambda0=2", x: "x", y: "psi", curves })
}

/// Half-line states for `μ = 2` with `λ₀ = e^{−μ²/(8E₀)}`.
fn half_line_figure() -> CliResult<Figure> {
    let mu = 2.0;
    let xs = linear_grid(-5.0, 5.0, 401)?;
    let pairs = FIG4_E0
        .iter()
        .map(|&e0| Ok((e0, half_line_lambda0(mu, e0, HalfLine::Right)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let curves = wavefunction_curves(mu, &pairs, &xs)?;
    Ok(Figure { index: 4, title: "half-line bound wavefunctions, mu=2", x: "x", y: "psi", curves })
}

fn file_name(figure: &Figure, curve: &Curve, format: Format) -> String {
    let label: String =
        curve.label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect();
    format!("fig{}_{}.{}", figure.index, label, format.extension())
}

/// Writes one table per curve plus `manifest.json` into `dir`.
pub fn write_figure(figure: &Figure, dir: &Path, format: Format) -> CliResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut manifest =
        Manifest { figure: figure.index, title: figure.title, x: figure.x, y: figure.y, format, curves: Vec::new() };
    for curve in &figure.curves {
        let name = file_name(figure, curve, format);
        let path = dir.join(&name);
        write_atomic(&path, curve.table.render(format).as_bytes())?;
        files.push(path);
        manifest.curves.push(ManifestCurve { label: &curve.label, file: name, params: &curve.params });
    }
    let path = dir.join("manifest.json");
    write_atomic(&path, (serde_json::to_string_pretty(&manifest)? + "\n").as_bytes())?;
    files.push(path);
    Ok(files)
}
