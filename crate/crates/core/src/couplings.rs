//! Energy-dependent coupling functions `F(E)` (δ′ strength) and `G(E)` (δ strength).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Bound on the exponent of the decay law; `e^{±700}` stays inside the `f64` range.
const EXP_CLAMP: f64 = 700.0;

/// A coupling strength as a function of the stationary-state energy.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingFunction {
    /// Energy-independent strength.
    Constant { value: f64 },
    /// `λ₀·exp(−E/E₀)`, vanishing at high energy. `e0` is strictly positive.
    ExponentialDecay { lambda0: f64, e0: f64 },
    /// Truncated power series `Σ cₙ Eⁿ`, never empty.
    PowerSeries { coeffs: Vec<f64> },
}

/// Value of a coupling as `E → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HighEnergyLimit {
    Finite(f64),
    Divergent,
}

impl CouplingFunction {
    pub fn constant(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidCoupling(format!("constant value {value} is not finite")));
        }
        Ok(CouplingFunction::Constant { value })
    }

    /// Builds the decay law `λ₀·exp(−E/E₀)`. An infinite `e0` is the
    /// energy-independent limit and yields `Constant { value: lambda0 }`.
    pub fn exponential(lambda0: f64, e0: f64) -> Result<Self> {
        if !lambda0.is_finite() {
            return Err(Error::InvalidCoupling(format!("lambda0 {lambda0} is not finite")));
        }
        if e0 == f64::INFINITY {
            return Ok(CouplingFunction::Constant { value: lambda0 });
        }
        if !(e0 > 0.0) || !e0.is_finite() {
            return Err(Error::InvalidCoupling(format!("E0 must be positive, got {e0}")));
        }
        Ok(CouplingFunction::ExponentialDecay { lambda0, e0 })
    }

    pub fn power_series(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCoupling("power series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCoupling("power series coefficients must be finite".into()));
        }
        Ok(CouplingFunction::PowerSeries { coeffs })
    }

    /// Re-checks the construction invariants; used for values built directly
    /// from the enum variants.
    pub fn validate(&self) -> Result<()> {
        match self {
            CouplingFunction::Constant { value } => Self::constant(*value).map(drop),
            CouplingFunction::ExponentialDecay { lambda0, e0 } => {
                if e0.is_infinite() {
                    return Err(Error::InvalidCoupling("E0 = inf must be written as a constant".into()));
                }
                Self::exponential(*lambda0, *e0).map(drop)
            }
            CouplingFunction::PowerSeries { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidCoupling("power series must be non-empty and finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn evaluate(&self, energy: f64) -> f64 {
        match self {
            CouplingFunction::Constant { value } => *value,
            CouplingFunction::ExponentialDecay { lambda0, e0 } => {
                lambda0 * (-energy / e0).clamp(-EXP_CLAMP, EXP_CLAMP).exp()
            }
            CouplingFunction::PowerSeries { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * energy + c),
        }
    }

    /// Analytic `dF/dE`.
    pub fn derivative(&self, energy: f64) -> f64 {
        match self {
            CouplingFunction::Constant { .. } => 0.0,
            CouplingFunction::ExponentialDecay { e0, .. } => -self.evaluate(energy) / e0,
            CouplingFunction::PowerSeries { coeffs } => {
                coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (n, c)| acc * energy + n as f64 * c)
            }
        }
    }

    pub fn high_energy_limit(&self) -> HighEnergyLimit {
        match self {
            CouplingFunction::Constant { value } => HighEnergyLimit::Finite(*value),
            CouplingFunction::ExponentialDecay { .. } => HighEnergyLimit::Finite(0.0),
            CouplingFunction::PowerSeries { coeffs } => {
                if coeffs[1..].iter().all(|&c| c == 0.0) {
                    HighEnergyLimit::Finite(coeffs[0])
                } else {
                    HighEnergyLimit::Divergent
                }
            }
        }
    }

    /// True when the function is zero for every energy.
    pub fn is_identically_zero(&self) -> bool {
        match self {
            CouplingFunction::Constant { value } => *value == 0.0,
            CouplingFunction::ExponentialDecay { lambda0, .. } => *lambda0 == 0.0,
            CouplingFunction::PowerSeries { coeffs } => coeffs.iter().all(|&c| c == 0.0),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            CouplingFunction::Constant { .. } => true,
            CouplingFunction::ExponentialDecay { lambda0, .. } => *lambda0 == 0.0,
            CouplingFunction::PowerSeries { coeffs } => coeffs[1..].iter().all(|&c| c == 0.0),
        }
    }
}

// JSON fragments:
//   {"type":"constant","value":x}
//   {"type":"exp","lambda0":x,"e0":y}      ("e0":"inf" maps to constant)
//   {"type":"series","coeffs":[...]}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawCoupling {
    Constant { value: f64 },
    Exp { lambda0: f64, e0: Energy },
    Series { coeffs: Vec<f64> },
}

/// A positive energy scale that may be written as a number or as `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy(pub f64);

impl Serialize for Energy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() && self.0 > 0.0 {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Energy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum NumOrStr {
            Num(f64),
            Str(String),
        }
        match NumOrStr::deserialize(deserializer)? {
            NumOrStr::Num(v) => Ok(Energy(v)),
            NumOrStr::Str(s) => parse_energy(&s).map(Energy).map_err(serde::de::Error::custom),
        }
    }
}

/// Parses a number or one of `inf`, `+inf`, `infinity` (case-insensitive).
pub fn parse_energy(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => t.parse::<f64>().map_err(|e| format!("cannot parse '{t}' as an energy: {e}")),
    }
}

impl Serialize for CouplingFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self {
            CouplingFunction::Constant { value } => RawCoupling::Constant { value: *value },
            CouplingFunction::ExponentialDecay { lambda0, e0 } => {
                RawCoupling::Exp { lambda0: *lambda0, e0: Energy(*e0) }
            }
            CouplingFunction::PowerSeries { coeffs } => RawCoupling::Series { coeffs: coeffs.clone() },
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CouplingFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let built = match RawCoupling::deserialize(deserializer)? {
            RawCoupling::Constant { value } => CouplingFunction::constant(value),
            RawCoupling::Exp { lambda0, e0 } => CouplingFunction::exponential(lambda0, e0.0),
            RawCoupling::Series { coeffs } => CouplingFunction::power_series(coeffs),
        };
        built.map_err(serde::de::Error::custom)
    }
}
