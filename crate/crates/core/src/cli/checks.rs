//! Randomized self-check suite over the invariants of every module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bound_state::{bound_state, count_sign_changes, energy_residual, half_line_lambda0, solve_energy, HalfLine};
use crate::boundary::{delta_delta_prime_matrix, TransferMatrix};
use crate::couplings::CouplingFunction;
use crate::oracles::{bound_energy_from_matrix, finite_difference, norm_quadrature, smooth_norm, ResidualReport};
use crate::scattering::{closed_form, scatter_from_matrix, ModelSpec};

/// Deliberate corruption of the transfer-matrix route, used to confirm that
/// the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip the sign of `t11`.
    EntrySignFlip,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: 20_100_517, fault: None }
    }
}

impl CheckOptions {
    fn corrupt(&self, t: TransferMatrix) -> TransferMatrix {
        match self.fault {
            Some(Fault::EntrySignFlip) => TransferMatrix { t11: -t.t11, ..t },
            None => t,
        }
    }
}

fn random_model(rng: &mut ChaCha8Rng) -> ModelSpec {
    match rng.gen_range(0..3) {
        0 => ModelSpec::PureDelta { mu: rng.gen_range(-5.0..5.0) },
        1 => ModelSpec::ConstantDeltaPrime { mu: rng.gen_range(1e-3..5.0), lambda: rng.gen_range(-3.0..3.0) },
        _ => ModelSpec::EnergyDependent {
            mu: rng.gen_range(1e-3..5.0),
            f: CouplingFunction::ExponentialDecay { lambda0: rng.gen_range(-3.0..3.0), e0: rng.gen_range(0.05..10.0) },
        },
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..hi.log10()))
}

/// Largest absolute value, with `NaN` (a failed evaluation) dominating.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// `λ₀` away from zero so the bound bracket end is strictly negative.
fn random_lambda0(rng: &mut ChaCha8Rng) -> f64 {
    let v: f64 = rng.gen_range(0.01..3.0);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn run_checks(opts: &CheckOptions) -> Vec<ResidualReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut reports = Vec::new();

    let unitarity = worst((0..1000).map(|_| {
        let model = random_model(&mut rng);
        let k = log_uniform(&mut rng, 1e-3, 1e3);
        closed_form(&model, k).map_or(f64::NAN, |r| r.unitarity_residual())
    }));
    reports.push(ResidualReport::new("unitarity: closed forms, 1000 draws", unitarity, 1e-12));

    let unitarity_matrix = worst((0..1000).map(|_| {
        let g = rng.gen_range(-5.0..5.0);
        let f = rng.gen_range(-0.9..0.9);
        let k = log_uniform(&mut rng, 1e-3, 1e3);
        delta_delta_prime_matrix(g, f)
            .and_then(|t| scatter_from_matrix(&opts.corrupt(t), k))
            .map_or(f64::NAN, |r| r.unitarity_residual())
    }));
    reports.push(ResidualReport::new("unitarity: transfer-matrix solve, 1000 draws", unitarity_matrix, 1e-12));

    let oracle = worst((0..1000).map(|_| {
        let mu = rng.gen_range(1e-3..5.0);
        let lambda = rng.gen_range(-0.9..0.9);
        let k = log_uniform(&mut rng, 1e-2, 1e2);
        let model = ModelSpec::ConstantDeltaPrime { mu, lambda };
        let a = closed_form(&model, k);
        let b = model.matrix_at(0.5 * k * k).and_then(|t| scatter_from_matrix(&opts.corrupt(t), k));
        match (a, b) {
            (Ok(a), Ok(b)) => (a.r - b.r).norm().max((a.s - b.s).norm()),
            _ => f64::NAN,
        }
    }));
    reports.push(ResidualReport::new("oracle: closed form vs transfer matrix, 1000 draws", oracle, 1e-12));

    let reduction_zero = worst((0..200).map(|_| {
        let mu = rng.gen_range(1e-3..5.0);
        let k = log_uniform(&mut rng, 1e-3, 1e3);
        let e0 = rng.gen_range(0.05..10.0);
        let a = closed_form(
            &ModelSpec::EnergyDependent { mu, f: CouplingFunction::ExponentialDecay { lambda0: 0.0, e0 } },
            k,
        );
        let b = closed_form(&ModelSpec::PureDelta { mu }, k);
        match (a, b) {
            (Ok(a), Ok(b)) => (a.r - b.r).norm().max((a.s - b.s).norm()),
            _ => f64::NAN,
        }
    }));
    reports.push(ResidualReport::new("reduction: lambda0 = 0 equals pure delta", reduction_zero, 0.0));

    let reduction_inf = worst((0..200).map(|_| {
        let mu = rng.gen_range(1e-3..5.0);
        let lambda = rng.gen_range(-3.0..3.0);
        let k = log_uniform(&mut rng, 1e-3, 1e3);
        let f = CouplingFunction::exponential(lambda, f64::INFINITY).expect("finite lambda");
        let a = closed_form(&ModelSpec::EnergyDependent { mu, f }, k);
        let b = closed_form(&ModelSpec::ConstantDeltaPrime { mu, lambda }, k);
        match (a, b) {
            (Ok(a), Ok(b)) => (a.r - b.r).norm().max((a.s - b.s).norm()),
            _ => f64::NAN,
        }
    }));
    reports.push(ResidualReport::new("reduction: E0 = inf equals constant delta-prime", reduction_inf, 1e-14));

    let transparency = closed_form(
        &ModelSpec::EnergyDependent { mu: 1.0, f: CouplingFunction::ExponentialDecay { lambda0: 1.0, e0: 0.5 } },
        10.0,
    )
    .map_or(f64::NAN, |r| r.transmittance() - 100.0 / 101.0);
    reports.push(ResidualReport::new(
        "transparency: |s(10)|^2 = 100/101 at mu = lambda0 = k0 = 1",
        transparency,
        1e-12,
    ));

    let mut energy_oracle = Vec::new();
    let mut transcendental = Vec::new();
    let mut norm = Vec::new();
    let mut matching = Vec::new();
    let mut quadrature = Vec::new();
    for _ in 0..200 {
        let mu = rng.gen_range(0.05..3.0);
        let f = CouplingFunction::ExponentialDecay { lambda0: random_lambda0(&mut rng), e0: rng.gen_range(0.1..10.0) };
        let Ok(state) = bound_state(mu, &f) else {
            energy_oracle.push(f64::NAN);
            continue;
        };
        let g = CouplingFunction::Constant { value: mu };
        let via_matrix = bound_energy_from_matrix(&g, &f, -0.5 * mu * mu, 0.0, 2000);
        energy_oracle.push(via_matrix.map_or(f64::NAN, |e| e - state.energy));
        transcendental.push(energy_residual(mu, &f, state.energy) / (0.5 * mu * mu).max(1.0));
        norm.push(state.norm_identity() - 1.0);
        matching.push(state.matching_residual().abs().max(state.jump_residual().abs()));
        let q = norm_quadrature(&state, 30.0 / state.kappa).map_or(f64::NAN, |q| q - smooth_norm(&state));
        quadrature.push(q / smooth_norm(&state));
    }
    reports.push(ResidualReport::new(
        "oracle: solved energy vs transfer-matrix root, 200 draws",
        worst(energy_oracle),
        1e-10,
    ));
    reports.push(ResidualReport::new("bound: transcendental residual (relative)", worst(transcendental), 1e-12));
    reports.push(ResidualReport::new("bound: modified norm identity", worst(norm), 1e-10));
    reports.push(ResidualReport::new("bound: matching and jump relations", worst(matching), 1e-10));
    reports.push(ResidualReport::new("oracle: quadrature of the smooth norm (relative)", worst(quadrature), 1e-8));

    let not_unique = (0..100)
        .filter(|_| {
            let mu = rng.gen_range(0.01..3.0);
            let f = if rng.gen_bool(0.5) {
                CouplingFunction::Constant { value: random_lambda0(&mut rng) }
            } else {
                CouplingFunction::ExponentialDecay { lambda0: random_lambda0(&mut rng), e0: rng.gen_range(0.1..10.0) }
            };
            count_sign_changes(mu, &f, 1000) != 1
        })
        .count();
    reports.push(ResidualReport::new("bound: single sign change, 100 draws", not_unique as f64, 0.0));

    let derivative = worst((0..200).map(|_| {
        let e = rng.gen_range(-5.0..5.0);
        let f = CouplingFunction::ExponentialDecay { lambda0: rng.gen_range(-3.0..3.0), e0: rng.gen_range(0.1..10.0) };
        let d = f.derivative(e);
        finite_difference(&f, e, 1e-6).map_or(f64::NAN, |fd| (fd - d) / d.abs().max(1.0))
    }));
    reports.push(ResidualReport::new("couplings: derivative vs central difference", derivative, 1e-5));

    let half_line = {
        let l0 = half_line_lambda0(2.0, 1.0, HalfLine::Right).expect("valid parameters");
        let f = CouplingFunction::ExponentialDecay { lambda0: l0, e0: 1.0 };
        match (solve_energy(2.0, &f), bound_state(2.0, &f)) {
            (Ok(e), Ok(s)) => ((e + 0.5).abs()).max(s.a.abs() / s.b.abs()),
            _ => f64::NAN,
        }
    };
    reports.push(ResidualReport::new("bound: half-line state at mu = 2, E0 = 1", half_line, 1e-10));

    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let reports = run_checks(&CheckOptions::default());
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
        assert!(reports.len() >= 12);
    }

    #[test]
    fn sign_flip_is_caught() {
        let reports = run_checks(&CheckOptions { fault: Some(Fault::EntrySignFlip), ..Default::default() });
        let unitarity = reports.iter().find(|r| r.context.starts_with("unitarity: transfer")).unwrap();
        assert!(!unitarity.passed);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let opts = CheckOptions { seed: 7, fault: None };
        assert_eq!(run_checks(&opts), run_checks(&opts));
    }
}
