//! Reflection and transmission of a left-incident plane wave
//! `ψ = e^{ikx} + r e^{−ikx}` (x < 0), `ψ = s e^{ikx}` (x > 0).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{delta_delta_prime_matrix, TransferMatrix};
use crate::couplings::CouplingFunction;
use crate::error::{Error, Result};
use crate::sweep::{ScatterRow, SweepTable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub k: f64,
    pub r: Complex64,
    pub s: Complex64,
}

impl ScatteringResult {
    pub fn reflectance(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmittance(&self) -> f64 {
        self.s.norm_sqr()
    }

    /// `|r|² + |s|² − 1`.
    pub fn unitarity_residual(&self) -> f64 {
        self.r.norm_sqr() + self.s.norm_sqr() - 1.0
    }
}

/// The point interaction `−G(E)δ(x) + F(E)δ′(x)` in its supported forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    /// `−μδ(x)`; any real `μ`.
    PureDelta { mu: f64 },
    /// `−μδ(x) + λδ′(x)` with `μ > 0`.
    ConstantDeltaPrime { mu: f64, lambda: f64 },
    /// `−μδ(x) + F(E)δ′(x)` with `μ > 0`.
    EnergyDependent { mu: f64, f: CouplingFunction },
    /// `−G(E)δ(x) + F(E)δ′(x)`.
    General { g: CouplingFunction, f: CouplingFunction },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::PureDelta { mu } => finite("mu", *mu),
            ModelSpec::ConstantDeltaPrime { mu, lambda } => {
                positive_mu(*mu)?;
                finite("lambda", *lambda)
            }
            ModelSpec::EnergyDependent { mu, f } => {
                positive_mu(*mu)?;
                f.validate()
            }
            ModelSpec::General { g, f } => {
                g.validate()?;
                f.validate()
            }
        }
    }

    /// δ strength `G(E)`.
    pub fn strength_at(&self, energy: f64) -> f64 {
        match self {
            ModelSpec::PureDelta { mu }
            | ModelSpec::ConstantDeltaPrime { mu, .. }
            | ModelSpec::EnergyDependent { mu, .. } => *mu,
            ModelSpec::General { g, .. } => g.evaluate(energy),
        }
    }

    /// δ′ strength `F(E)`.
    pub fn coupling_at(&self, energy: f64) -> f64 {
        match self {
            ModelSpec::PureDelta { .. } => 0.0,
            ModelSpec::ConstantDeltaPrime { lambda, .. } => *lambda,
            ModelSpec::EnergyDependent { f, .. } | ModelSpec::General { f, .. } => f.evaluate(energy),
        }
    }

    /// `(G, F)` as coupling functions.
    pub fn couplings(&self) -> (CouplingFunction, CouplingFunction) {
        match self {
            ModelSpec::PureDelta { mu } => {
                (CouplingFunction::Constant { value: *mu }, CouplingFunction::Constant { value: 0.0 })
            }
            ModelSpec::ConstantDeltaPrime { mu, lambda } => {
                (CouplingFunction::Constant { value: *mu }, CouplingFunction::Constant { value: *lambda })
            }
            ModelSpec::EnergyDependent { mu, f } => (CouplingFunction::Constant { value: *mu }, f.clone()),
            ModelSpec::General { g, f } => (g.clone(), f.clone()),
        }
    }

    /// The matching matrix with couplings evaluated at `energy`.
    pub fn matrix_at(&self, energy: f64) -> Result<TransferMatrix> {
        delta_delta_prime_matrix(self.strength_at(energy), self.coupling_at(energy))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} must be finite, got {v}")))
    }
}

fn positive_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("mu must be positive, got {mu}")))
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::BadDomain(format!("wavenumber must be positive, got {k}")))
    }
}

/// Solves the matching system
///
/// ```text
/// ik s = t11·ik(1 − r) + t12·(1 + r)
///    s = t21·ik(1 − r) + t22·(1 + r)
/// ```
///
/// for `r` and `s`.
pub fn scatter_from_matrix(t: &TransferMatrix, k: f64) -> Result<ScatteringResult> {
    check_k(k)?;
    if !t.is_finite() {
        return Err(Error::InvalidParams("transfer matrix has non-finite entries".into()));
    }
    let ik = Complex64::new(0.0, k);
    // Unknowns (s, r):  [ik, t11·ik − t12] [s]   [t11·ik + t12]
    //                   [1,  t21·ik − t22] [r] = [t21·ik + t22]
    let a11 = ik;
    let a12 = t.t11 * ik - t.t12;
    let a21 = Complex64::new(1.0, 0.0);
    let a22 = t.t21 * ik - t.t22;
    let b1 = t.t11 * ik + t.t12;
    let b2 = t.t21 * ik + t.t22;

    let det = a11 * a22 - a12 * a21;
    let scale = k * k * t.t21.abs() + k * (t.t11.abs() + t.t22.abs()) + t.t12.abs();
    if det.norm() < 1e-14 * scale || det.norm() == 0.0 {
        return Err(Error::DegenerateSystem { k });
    }
    let s = (b1 * a22 - a12 * b2) / det;
    let r = (a11 * b2 - a21 * b1) / det;
    Ok(ScatteringResult { k, r, s })
}

/// `r` and `s` for `−μδ(x) + λδ′(x)`:
///
/// ```text
/// r = −(μ + 2ikλ) / (μ + ik(1 + λ²))
/// s = ik(1 − λ²) / (μ + ik(1 + λ²))
/// ```
fn delta_prime_coefficients(mu: f64, lambda: f64, k: f64) -> ScatteringResult {
    let lam2 = lambda * lambda;
    let denom = Complex64::new(mu, k * (1.0 + lam2));
    let r = -Complex64::new(mu, 2.0 * k * lambda) / denom;
    let s = Complex64::new(0.0, k * (1.0 - lam2)) / denom;
    ScatteringResult { k, r, s }
}

pub fn closed_form(model: &ModelSpec, k: f64) -> Result<ScatteringResult> {
    check_k(k)?;
    model.validate()?;
    let energy = 0.5 * k * k;
    match model {
        ModelSpec::PureDelta { mu } => Ok(delta_prime_coefficients(*mu, 0.0, k)),
        ModelSpec::ConstantDeltaPrime { mu, lambda } => Ok(delta_prime_coefficients(*mu, *lambda, k)),
        ModelSpec::EnergyDependent { mu, f } => Ok(delta_prime_coefficients(*mu, f.evaluate(energy), k)),
        ModelSpec::General { .. } => scatter_from_matrix(&model.matrix_at(energy)?, k),
    }
}

/// Evaluates [`closed_form`] on every grid point. Per-point failures become
/// flagged rows; only an invalid grid or model aborts the sweep.
pub fn transmission_sweep(model: &ModelSpec, grid: &[f64]) -> Result<SweepTable<ScatterRow>> {
    model.validate()?;
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty wavenumber grid".into()));
    }
    if let Some(bad) = grid.iter().find(|k| !(**k > 0.0) || !k.is_finite()) {
        return Err(Error::InvalidGrid(format!("wavenumbers must be positive, got {bad}")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("wavenumbers must be strictly increasing".into()));
    }
    let rows = grid
        .iter()
        .map(|&k| match closed_form(model, k) {
            Ok(res) => ScatterRow::from_result(&res),
            Err(e) => ScatterRow::failed(k, e.to_string()),
        })
        .collect();
    Ok(SweepTable::new(rows))
}
