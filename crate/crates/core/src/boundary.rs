//! Matching matrices for point interactions and conversions between the
//! `(α, β, δ, γ)` and `(ξ₁, ξ₂, ξ₃, Δ)` parametrizations.
//!
//! A [`TransferMatrix`] maps the left limits at the origin onto the right
//! limits, `(ψ′₊, ψ₊) = T·(ψ′₋, ψ₋)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guard used for singular-parameter checks.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub t11: f64,
    pub t12: f64,
    pub t21: f64,
    pub t22: f64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix { t11: 1.0, t12: 0.0, t21: 0.0, t22: 1.0 };

    pub fn new(t11: f64, t12: f64, t21: f64, t22: f64) -> Self {
        TransferMatrix { t11, t12, t21, t22 }
    }

    pub fn det(&self) -> f64 {
        self.t11 * self.t22 - self.t12 * self.t21
    }

    pub fn trace(&self) -> f64 {
        self.t11 + self.t22
    }

    pub fn is_finite(&self) -> bool {
        [self.t11, self.t12, self.t21, self.t22].iter().all(|v| v.is_finite())
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.t11, self.t12, self.t21, self.t22]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TransferMatrix::new(factor * self.t11, factor * self.t12, factor * self.t21, factor * self.t22)
    }

    /// Applies the matrix to `(ψ′₋, ψ₋)`.
    pub fn apply(&self, derivative: f64, value: f64) -> (f64, f64) {
        (self.t11 * derivative + self.t12 * value, self.t21 * derivative + self.t22 * value)
    }
}

/// Real parameters of `U = e^{iθ}(α β; δ γ)` with `αγ − βδ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbgdParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl AbgdParams {
    pub fn new(alpha: f64, beta: f64, delta: f64, gamma: f64) -> Result<Self> {
        let p = AbgdParams { alpha, beta, delta, gamma };
        let scale = 1f64.max((alpha * gamma).abs()).max((beta * delta).abs());
        if (p.constraint() - 1.0).abs() > SINGULAR_TOL * scale {
            return Err(Error::InvalidParams(format!("αγ − βδ = {} (expected 1)", p.constraint())));
        }
        Ok(p)
    }

    /// `αγ − βδ`.
    pub fn constraint(&self) -> f64 {
        self.alpha * self.gamma - self.beta * self.delta
    }

    /// The matrix `(α β; δ γ)` without the phase factor.
    pub fn to_matrix(&self) -> TransferMatrix {
        TransferMatrix::new(self.alpha, self.beta, self.delta, self.gamma)
    }

    pub fn from_matrix(t: &TransferMatrix) -> Result<Self> {
        AbgdParams::new(t.t11, t.t12, t.t21, t.t22)
    }
}

/// Parameters of the symmetric form of the boundary conditions,
///
/// ```text
/// ψ′₊ − ψ′₋ = ξ₁(ψ₊ + ψ₋) − ξ₂(ψ′₊ + ψ′₋)
/// ψ₊ − ψ₋  = ξ₂(ψ₊ + ψ₋) − ξ₃(ψ′₊ + ψ′₋)
/// ```
///
/// with `Δ = (1 + ξ₂)(1 − ξ₂) + ξ₁ξ₃ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiParams {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub delta: f64,
}

impl XiParams {
    /// Computes `Δ` from the three ξ values.
    pub fn new(xi1: f64, xi2: f64, xi3: f64) -> Result<Self> {
        let delta = Self::consistent_delta(xi1, xi2, xi3);
        Self::with_delta(xi1, xi2, xi3, delta)
    }

    /// Uses a caller-supplied `Δ`, checked against the ξ values.
    pub fn with_delta(xi1: f64, xi2: f64, xi3: f64, delta: f64) -> Result<Self> {
        let p = XiParams { xi1, xi2, xi3, delta };
        p.check()?;
        Ok(p)
    }

    pub fn consistent_delta(xi1: f64, xi2: f64, xi3: f64) -> f64 {
        (1.0 + xi2) * (1.0 - xi2) + xi1 * xi3
    }

    fn check(&self) -> Result<()> {
        let vals = [self.xi1, self.xi2, self.xi3, self.delta];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("ξ parameters must be finite".into()));
        }
        if self.delta.abs() < SINGULAR_TOL {
            return Err(Error::InvalidParams("Δ must be non-zero".into()));
        }
        let expected = Self::consistent_delta(self.xi1, self.xi2, self.xi3);
        let scale = 1f64.max(self.xi2 * self.xi2).max((self.xi1 * self.xi3).abs()).max(self.delta.abs());
        if (expected - self.delta).abs() > SINGULAR_TOL * scale {
            return Err(Error::InvalidParams(format!(
                "Δ = {} inconsistent with ξ values (expected {expected})",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Jump condition of `V(x) = 2c₀δ(x)`: `[[1, 2c₀], [0, 1]]`.
///
/// The attractive term `−μδ(x)` corresponds to `strength = −μ`.
pub fn pure_delta_matrix(strength: f64) -> TransferMatrix {
    TransferMatrix::new(1.0, 2.0 * strength, 0.0, 1.0)
}

/// Matching matrix of `−G δ(x) + F δ′(x)` for coupling values `G` and `F`:
///
/// ```text
/// T = [[(1−F)/(1+F), −2G/(1−F²)],
///      [0,           (1+F)/(1−F)]]
/// ```
pub fn delta_delta_prime_matrix(g: f64, f: f64) -> Result<TransferMatrix> {
    if (f - 1.0).abs() < SINGULAR_TOL || (f + 1.0).abs() < SINGULAR_TOL {
        return Err(Error::SingularCoupling { value: f });
    }
    Ok(TransferMatrix::new((1.0 - f) / (1.0 + f), -2.0 * g / (1.0 - f * f), 0.0, (1.0 + f) / (1.0 - f)))
}

/// `(1 − F²)·T` for the matrix above: `[[(1−F)², −2G], [0, (1+F)²]]`.
///
/// Encodes the same matching conditions wherever `T` exists and stays finite
/// at `F = ±1`, where the interaction decouples the two half-lines.
pub fn delta_delta_prime_homogeneous(g: f64, f: f64) -> TransferMatrix {
    TransferMatrix::new((1.0 - f) * (1.0 - f), -2.0 * g, 0.0, (1.0 + f) * (1.0 + f))
}

/// `U = −(1/Δ)·[[Δ − 2(1 − ξ₂), −2ξ₁], [2ξ₃, Δ − 2(1 + ξ₂)]]`.
///
/// This carries the `e^{iθ} = −1` phase, so it equals `−(α β; δ γ)` for the
/// parameters returned by [`abgd_from_xi`].
pub fn matrix_from_xi(p: &XiParams) -> Result<TransferMatrix> {
    p.check()?;
    let d = p.delta;
    let m = TransferMatrix::new(d - 2.0 * (1.0 - p.xi2), -2.0 * p.xi1, 2.0 * p.xi3, d - 2.0 * (1.0 + p.xi2));
    Ok(m.scaled(-1.0 / d))
}

pub fn xi_from_abgd(p: &AbgdParams) -> Result<XiParams> {
    let denom = 2.0 - p.alpha - p.gamma;
    if denom.abs() < SINGULAR_TOL {
        return Err(Error::SingularConversion(denom));
    }
    let delta = 4.0 / denom;
    let xi1 = -p.beta * delta / 2.0;
    let xi2 = (p.alpha - p.gamma) * delta / 4.0;
    let xi3 = p.delta * delta / 2.0;
    XiParams::with_delta(xi1, xi2, xi3, delta)
}

pub fn abgd_from_xi(p: &XiParams) -> Result<AbgdParams> {
    p.check()?;
    let d = p.delta;
    let sum = 2.0 - 4.0 / d;
    let diff = 4.0 * p.xi2 / d;
    let out = AbgdParams {
        alpha: (sum + diff) / 2.0,
        beta: -2.0 * p.xi1 / d,
        delta: 2.0 * p.xi3 / d,
        gamma: (sum - diff) / 2.0,
    };
    if (out.constraint() - 1.0).abs() > 1e-10 * 1f64.max((out.alpha * out.gamma).abs()) {
        return Err(Error::InvalidParams(format!("αγ − βδ = {} after inversion", out.constraint())));
    }
    Ok(out)
}
