//! The single bound state `ψ(x) = A e^{κx} Θ(−x) + B e^{−κx} Θ(x)`.
//!
//! Matching across the origin gives `κ(1 + F(E)²) = G(E)` with `κ = √(−2E)`,
//! so the energy solves the transcendental equation
//! `E = −(G²/2)/(1 + F(E)²)²`, and the amplitudes obey
//! `B(1 − F) = A(1 + F)`. Normalization uses the modified density
//! `(1 − ∂V/∂E)|ψ|²` of energy-dependent potentials, which for the δ′ term
//! contributes `κ F′(E)(A² − B²)` and for the δ term `G′(E)·((A + B)/2)²`.

use serde::Serialize;

use crate::couplings::CouplingFunction;
use crate::error::{Error, Result};
use crate::scattering::ModelSpec;
use crate::sweep::{BoundRow, SweepTable, WavefunctionRow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub energy: f64,
    pub kappa: f64,
    /// `F(E)`.
    pub lambda_e: f64,
    /// Amplitude on `x < 0`.
    pub a: f64,
    /// Amplitude on `x > 0`.
    pub b: f64,
    /// `G(E)`; equals `μ` for a constant δ strength.
    pub mu: f64,
    /// `F′(E)`.
    pub coupling_slope: f64,
    /// `G′(E)`.
    pub strength_slope: f64,
}

impl BoundState {
    /// Left side of the modified normalization condition; `1` for a normalized state.
    pub fn norm_identity(&self) -> f64 {
        let (a, b, k) = (self.a, self.b, self.kappa);
        let mean = 0.5 * (a + b);
        (a * a + b * b) / (2.0 * k) + k * self.coupling_slope * (a * a - b * b) + self.strength_slope * mean * mean
    }

    /// `κ(1 + F²) − G`.
    pub fn matching_residual(&self) -> f64 {
        self.kappa * (1.0 + self.lambda_e * self.lambda_e) - self.mu
    }

    /// `B(1 − F) − A(1 + F)`.
    pub fn jump_residual(&self) -> f64 {
        self.b * (1.0 - self.lambda_e) - self.a * (1.0 + self.lambda_e)
    }

    /// `ψ(x)`, with the average `(A + B)/2` at the origin.
    pub fn eval(&self, x: f64) -> f64 {
        wavefunction_eval(self, x)
    }
}

/// `E + (G²/2)/(1 + F²)²` and its derivative.
struct EnergyEquation<'a> {
    g: &'a CouplingFunction,
    f: &'a CouplingFunction,
}

impl EnergyEquation<'_> {
    fn value(&self, e: f64) -> f64 {
        let g = self.g.evaluate(e);
        let f = self.f.evaluate(e);
        let q = 1.0 + f * f;
        e + 0.5 * g * g / (q * q)
    }

    fn slope(&self, e: f64) -> f64 {
        let g = self.g.evaluate(e);
        let f = self.f.evaluate(e);
        let q = 1.0 + f * f;
        1.0 + g * self.g.derivative(e) / (q * q) - 2.0 * g * g * f * self.f.derivative(e) / (q * q * q)
    }

    /// Bisection on a bracket with `value(lo) ≤ 0 < value(hi)`, followed by
    /// at most five Newton steps that are kept only while they improve.
    fn root(&self, lo: f64, hi: f64) -> Result<f64> {
        let (mut a, mut b) = (lo, hi);
        let fa = self.value(a);
        let fb = self.value(b);
        if !fa.is_finite() {
            return Err(Error::NonFinite(a));
        }
        if !fb.is_finite() {
            return Err(Error::NonFinite(b));
        }
        if fa == 0.0 {
            return Ok(a);
        }
        if !(fa < 0.0 && fb > 0.0) {
            return Err(Error::NoSignChange { lo, hi });
        }
        let (mut va, mut vb) = (fa, fb);
        for _ in 0..2000 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let vm = self.value(m);
            if !vm.is_finite() {
                return Err(Error::NonFinite(m));
            }
            if vm == 0.0 {
                return Ok(m);
            }
            if vm < 0.0 {
                a = m;
                va = vm;
            } else {
                b = m;
                vb = vm;
            }
        }
        let (mut best, mut best_val) = if va.abs() <= vb.abs() { (a, va) } else { (b, vb) };
        for _ in 0..5 {
            let d = self.slope(best);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let next = best - best_val / d;
            if !(next >= lo && next < hi) {
                break;
            }
            let v = self.value(next);
            if v.abs() < best_val.abs() {
                best = next;
                best_val = v;
            } else {
                break;
            }
        }
        Ok(best)
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("mu must be positive, got {mu}")))
    }
}

/// Bound-state energy for `−μδ(x) + F(E)δ′(x)`; the unique root of
/// `E + (μ²/2)/(1 + F(E)²)²` on `[−μ²/2, 0)`.
pub fn solve_energy(mu: f64, f: &CouplingFunction) -> Result<f64> {
    check_mu(mu)?;
    f.validate()?;
    if f.is_identically_zero() {
        return Ok(-0.5 * mu * mu);
    }
    let g = CouplingFunction::Constant { value: mu };
    EnergyEquation { g: &g, f }.root(-0.5 * mu * mu, 0.0)
}

/// Bound-state energy for `−G(E)δ(x) + F(E)δ′(x)`.
///
/// The lower end of the bracket is `−G_max²/2`, with `G_max` estimated by
/// sampling `|G|` and enlarged until the energy function is non-positive
/// there. A root with `G(E) ≤ 0` is not a bound state.
pub fn solve_energy_general(g: &CouplingFunction, f: &CouplingFunction) -> Result<f64> {
    g.validate()?;
    f.validate()?;
    if g.is_identically_zero() {
        return Err(Error::NoBoundState("δ strength vanishes identically".into()));
    }
    if let CouplingFunction::Constant { value } = g {
        if *value <= 0.0 {
            return Err(Error::NoBoundState(format!("δ strength {value} is not attractive")));
        }
        return solve_energy(*value, f);
    }
    let eq = EnergyEquation { g, f };
    let mut g_max = g.evaluate(0.0).abs().max(1e-8);
    let mut lo = -0.5 * g_max * g_max;
    for _ in 0..64 {
        let sampled = (0..=64).map(|i| g.evaluate(lo * i as f64 / 64.0).abs()).fold(g_max, f64::max);
        if !sampled.is_finite() {
            return Err(Error::NonFinite(lo));
        }
        g_max = sampled;
        let candidate = -0.5 * g_max * g_max;
        if candidate < lo {
            lo = candidate;
        }
        if eq.value(lo) <= 0.0 {
            break;
        }
        lo *= 2.0;
    }
    let e = eq.root(lo, 0.0)?;
    let strength = g.evaluate(e);
    if !(strength > 0.0) {
        return Err(Error::NoBoundState(format!("G(E) = {strength} at E = {e}")));
    }
    Ok(e)
}

fn build_state(g: &CouplingFunction, f: &CouplingFunction, energy: f64) -> Result<BoundState> {
    if !(energy < 0.0) {
        return Err(Error::NoBoundState(format!("energy {energy} is not negative")));
    }
    let kappa = (-2.0 * energy).sqrt();
    let lambda_e = f.evaluate(energy);
    let coupling_slope = f.derivative(energy);
    let strength_slope = g.derivative(energy);
    // With A = (1 − F)X and B = (1 + F)X the norm condition is linear in X².
    let weight = (1.0 + lambda_e * lambda_e) / kappa - 4.0 * kappa * lambda_e * coupling_slope + strength_slope;
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(Error::NonNormalizable(weight));
    }
    let x = weight.sqrt().recip();
    Ok(BoundState {
        energy,
        kappa,
        lambda_e,
        a: (1.0 - lambda_e) * x,
        b: (1.0 + lambda_e) * x,
        mu: g.evaluate(energy),
        coupling_slope,
        strength_slope,
    })
}

/// Normalized amplitudes `(A, B)` at the energy `energy`.
///
/// For `F = λ₀e^{−E/E₀}` this is
/// `X = √[μ(1+λ²)/((1+λ²)³ + 4λ²μ²/E₀)]`, `A = (1−λ)X`, `B = (1+λ)X`.
pub fn amplitudes(mu: f64, f: &CouplingFunction, energy: f64) -> Result<(f64, f64)> {
    check_mu(mu)?;
    let state = build_state(&CouplingFunction::Constant { value: mu }, f, energy)?;
    Ok((state.a, state.b))
}

pub fn bound_state(mu: f64, f: &CouplingFunction) -> Result<BoundState> {
    let energy = solve_energy(mu, f)?;
    build_state(&CouplingFunction::Constant { value: mu }, f, energy)
}

pub fn bound_state_general(g: &CouplingFunction, f: &CouplingFunction) -> Result<BoundState> {
    let energy = solve_energy_general(g, f)?;
    build_state(g, f, energy)
}

pub fn bound_state_for(model: &ModelSpec) -> Result<BoundState> {
    model.validate()?;
    match model {
        ModelSpec::PureDelta { mu } if *mu <= 0.0 => {
            Err(Error::NoBoundState(format!("repulsive δ (μ = {mu}) has no bound state")))
        }
        ModelSpec::PureDelta { mu } => bound_state(*mu, &CouplingFunction::Constant { value: 0.0 }),
        ModelSpec::ConstantDeltaPrime { mu, lambda } => {
            bound_state(*mu, &CouplingFunction::Constant { value: *lambda })
        }
        ModelSpec::EnergyDependent { mu, f } => bound_state(*mu, f),
        ModelSpec::General { g, f } => bound_state_general(g, f),
    }
}

pub fn wavefunction_eval(state: &BoundState, x: f64) -> f64 {
    if x < 0.0 {
        state.a * (state.kappa * x).exp()
    } else if x > 0.0 {
        state.b * (-state.kappa * x).exp()
    } else {
        0.5 * (state.a + state.b)
    }
}

pub fn sample_wavefunction(state: &BoundState, xs: &[f64]) -> SweepTable<WavefunctionRow> {
    SweepTable::new(xs.iter().map(|&x| WavefunctionRow { x, psi: wavefunction_eval(state, x) }).collect())
}

/// Which side of the axis the half-line state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    /// `F(E) = +1`: `A = 0`, the state lives on `x > 0`.
    Right,
    /// `F(E) = −1`: `B = 0`, the state lives on `x < 0`.
    Left,
}

impl HalfLine {
    pub fn sign(self) -> f64 {
        match self {
            HalfLine::Right => 1.0,
            HalfLine::Left => -1.0,
        }
    }
}

/// `λ₀ = ±e^{−μ²/(8E₀)}`, the decay amplitude for which `F(E) = ±1` at the
/// bound-state energy `E = −μ²/8`. An infinite `e0` gives `±1`.
pub fn half_line_lambda0(mu: f64, e0: f64, side: HalfLine) -> Result<f64> {
    check_mu(mu)?;
    if !(e0 > 0.0) {
        return Err(Error::InvalidCoupling(format!("E0 must be positive, got {e0}")));
    }
    Ok(side.sign() * (-mu * mu / (8.0 * e0)).exp())
}

/// Bound states of `−μδ(x) + λ₀e^{−E/E₀}δ′(x)` across a grid of `λ₀`.
/// `e0 = ∞` gives the energy-independent coupling.
pub fn energy_sweep(mu: f64, e0: f64, lambda0_grid: &[f64]) -> Result<SweepTable<BoundRow>> {
    check_mu(mu)?;
    if lambda0_grid.is_empty() {
        return Err(Error::InvalidGrid("empty λ₀ grid".into()));
    }
    if let Some(bad) = lambda0_grid.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("λ₀ values must be finite, got {bad}")));
    }
    // Surface an invalid E₀ once instead of flagging every row.
    CouplingFunction::exponential(0.0, e0)?;
    let rows = lambda0_grid
        .iter()
        .map(|&lambda0| {
            let state = CouplingFunction::exponential(lambda0, e0).and_then(|f| bound_state(mu, &f));
            match state {
                Ok(s) => BoundRow::from_state(lambda0, &s),
                Err(e) => BoundRow::failed(lambda0, e.to_string()),
            }
        })
        .collect();
    Ok(SweepTable::new(rows))
}

/// Number of sign changes of `E + (μ²/2)/(1 + F(E)²)²` over `points` equally
/// spaced energies covering `[−μ²/2, 0]`.
pub fn count_sign_changes(mu: f64, f: &CouplingFunction, points: usize) -> usize {
    let g = CouplingFunction::Constant { value: mu };
    let eq = EnergyEquation { g: &g, f };
    let lo = -0.5 * mu * mu;
    let n = points.max(2);
    let signs: Vec<bool> = (0..n).map(|i| eq.value(lo + (0.0 - lo) * i as f64 / (n - 1) as f64) > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `|E(1 + F(E)²)² + μ²/2|`, the residual of the transcendental equation.
pub fn energy_residual(mu: f64, f: &CouplingFunction, energy: f64) -> f64 {
    let lam = f.evaluate(energy);
    let q = 1.0 + lam * lam;
    (energy * q * q + 0.5 * mu * mu).abs()
}
