//! Independent verification routes that do not share code with the closed forms.

use serde::Serialize;

use crate::bound_state::{wavefunction_eval, BoundState};
use crate::boundary::{delta_delta_prime_homogeneous, TransferMatrix};
use crate::couplings::CouplingFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: String,
}

impl ResidualReport {
    pub fn new(context: impl Into<String>, value: f64, tolerance: f64) -> Self {
        ResidualReport { value, tolerance, passed: value.abs() <= tolerance, context: context.into() }
    }
}

/// `t21κ² + (t11 + t22)κ + t12`.
///
/// Inserting `ψ₋ = A`, `ψ′₋ = κA`, `ψ₊ = B`, `ψ′₊ = −κB` into the matching
/// conditions leaves this quadratic; a decaying state exists at `κ` exactly
/// when it vanishes.
pub fn bound_residual_from_matrix(t: &TransferMatrix, kappa: f64) -> f64 {
    t.t21 * kappa * kappa + (t.t11 + t.t22) * kappa + t.t12
}

/// The bound residual of the pole-free matrix `(1 − F²)·T`, divided by the sum
/// of the magnitudes of its terms.
fn scaled_residual(g: &CouplingFunction, f: &CouplingFunction, energy: f64) -> f64 {
    let t = delta_delta_prime_homogeneous(g.evaluate(energy), f.evaluate(energy));
    let kappa = (-2.0 * energy).max(0.0).sqrt();
    let scale = t.t21.abs() * kappa * kappa + (t.t11.abs() + t.t22.abs()) * kappa + t.t12.abs();
    let r = bound_residual_from_matrix(&t, kappa);
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// Locates the bound-state energy on `[lo, hi]` from the transfer-matrix
/// residual alone: scan for sign changes, bisect each one to float
/// resolution, and keep the crossing with the smallest residual.
pub fn bound_energy_from_matrix(
    g: &CouplingFunction,
    f: &CouplingFunction,
    lo: f64,
    hi: f64,
    scan_points: usize,
) -> Result<f64> {
    let n = scan_points.max(2);
    let energies: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let samples: Vec<f64> = energies.iter().map(|&e| scaled_residual(g, f, e)).collect();

    let mut best: Option<(f64, f64)> = None;
    for i in 0..n - 1 {
        let (ra, rb) = (samples[i], samples[i + 1]);
        if ra == 0.0 {
            return Ok(energies[i]);
        }
        if (ra < 0.0) == (rb < 0.0) {
            continue;
        }
        let (mut a, mut b) = (energies[i], energies[i + 1]);
        let neg_at_a = ra < 0.0;
        loop {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let rm = scaled_residual(g, f, m);
            if rm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if (rm < 0.0) == neg_at_a {
                a = m;
            } else {
                b = m;
            }
        }
        let e = 0.5 * (a + b);
        let r = scaled_residual(g, f, e).abs();
        if r < 1e-9 && best.is_none_or(|(_, rb)| r < rb) {
            best = Some((e, r));
        }
    }
    best.map(|(e, _)| e).ok_or(Error::NoSignChange { lo, hi })
}

/// Adaptive Simpson quadrature with an absolute tolerance per panel and a
/// recursion depth cap.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫ψ² dx` over `[−half_width, half_width]`, integrating each side of the
/// origin separately. Point contributions at `x = 0` are not included.
pub fn norm_quadrature(state: &BoundState, half_width: f64) -> Result<f64> {
    if !(state.kappa > 0.0) {
        return Err(Error::BadDomain(format!("κ must be positive, got {}", state.kappa)));
    }
    if !(half_width >= 30.0 / state.kappa) {
        return Err(Error::BadDomain(format!("half-width {half_width} is below 30/κ = {}", 30.0 / state.kappa)));
    }
    let psi2 = |x: f64| {
        let v = wavefunction_eval(state, x);
        v * v
    };
    // The two sides are evaluated away from the origin so the average rule
    // at x = 0 never enters the integrand.
    let left = |x: f64| if x >= 0.0 { state.a * state.a } else { psi2(x) };
    let right = |x: f64| if x <= 0.0 { state.b * state.b } else { psi2(x) };
    let tol = 1e-10;
    Ok(adaptive_simpson(&left, -half_width, 0.0, tol, 40) + adaptive_simpson(&right, 0.0, half_width, tol, 40))
}

/// `(A² + B²)/(2κ)`, the closed form of the smooth part of the norm.
pub fn smooth_norm(state: &BoundState) -> f64 {
    (state.a * state.a + state.b * state.b) / (2.0 * state.kappa)
}

/// Central difference `(f(E + h) − f(E − h))/(2h)`.
pub fn finite_difference(f: &CouplingFunction, energy: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::BadDomain(format!("step must be positive, got {h}")));
    }
    Ok((f.evaluate(energy + h) - f.evaluate(energy - h)) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_state::{bound_state, solve_energy};
    use crate::boundary::{delta_delta_prime_matrix, pure_delta_matrix};

    fn state(a: f64, b: f64, kappa: f64) -> BoundState {
        BoundState {
            energy: -0.5 * kappa * kappa,
            kappa,
            lambda_e: 0.0,
            a,
            b,
            mu: 1.0,
            coupling_slope: 0.0,
            strength_slope: 0.0,
        }
    }

    #[test]
    fn residual_examples() {
        let mu = 1.7;
        assert_eq!(bound_residual_from_matrix(&pure_delta_matrix(-mu), mu), 0.0);
        let t = delta_delta_prime_matrix(1.0, 0.5).unwrap();
        assert!(bound_residual_from_matrix(&t, 0.8).abs() < 1e-14);
        assert_eq!(bound_residual_from_matrix(&TransferMatrix::IDENTITY, 0.3), 0.6);
    }

    #[test]
    fn root_next_to_the_coupling_pole() {
        let mu = 0.8211346527146962;
        let f = CouplingFunction::exponential(0.9842561163964747, 5.307675569426799).unwrap();
        let s = bound_state(mu, &f).unwrap();
        assert!((s.lambda_e - 1.0).abs() < 1e-4);
        let g = CouplingFunction::Constant { value: mu };
        let e = bound_energy_from_matrix(&g, &f, -0.5 * mu * mu, 0.0, 2000).unwrap();
        assert_close!(e, s.energy, 1e-12);
    }

    #[test]
    fn report_pass_flag() {
        assert!(ResidualReport::new("x", -1e-13, 1e-12).passed);
        assert!(!ResidualReport::new("x", 2e-12, 1e-12).passed);
        assert!(!ResidualReport::new("x", f64::NAN, 1e-12).passed);
    }

    #[test]
    fn quadrature_examples() {
        let q = norm_quadrature(&state(1.0, 1.0, 1.0), 40.0).unwrap();
        assert_close!(q, 1.0, 1e-8);
        let q = norm_quadrature(&state(-0.2, 0.6, 0.2), 200.0).unwrap();
        assert_close!(q, 1.0, 1e-8);
        assert!(norm_quadrature(&state(1.0, 1.0, 1.0), 10.0).is_err());
    }

    #[test]
    fn quadrature_of_solved_state() {
        let f = CouplingFunction::exponential(1.0, 1.0).unwrap();
        let s = bound_state(1.0, &f).unwrap();
        let q = norm_quadrature(&s, 40.0 / s.kappa).unwrap();
        assert_close!(q, smooth_norm(&s), 1e-8 * smooth_norm(&s));
    }

    #[test]
    fn finite_difference_examples() {
        let c = CouplingFunction::constant(2.5).unwrap();
        assert_eq!(finite_difference(&c, 3.0, 1e-6).unwrap(), 0.0);
        let e = CouplingFunction::exponential(1.0, 1.0).unwrap();
        assert_close!(finite_difference(&e, 0.0, 1e-6).unwrap(), -1.0, 1e-6);
        let p = CouplingFunction::power_series(vec![0.0, 2.0]).unwrap();
        assert_close!(finite_difference(&p, 0.7, 1e-6).unwrap(), 2.0, 1e-9);
        assert!(finite_difference(&p, 0.7, 0.0).is_err());
    }

    #[test]
    fn matrix_route_finds_energy() {
        let g = CouplingFunction::constant(1.0).unwrap();
        let f = CouplingFunction::exponential(1.0, 1.0).unwrap();
        let e = bound_energy_from_matrix(&g, &f, -0.5, 0.0, 400).unwrap();
        assert_close!(e, solve_energy(1.0, &f).unwrap(), 1e-12);

        // λ₀ = 3 crosses the F = 1 pole inside the bracket.
        let f = CouplingFunction::exponential(3.0, 0.2).unwrap();
        let e = bound_energy_from_matrix(&g, &f, -0.5, 0.0, 400).unwrap();
        assert_close!(e, solve_energy(1.0, &f).unwrap(), 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn quadrature_matches_closed_form(a in -2.0..2.0f64, b in -2.0..2.0f64, kappa in 0.05..5.0f64) {
                let s = state(a, b, kappa);
                let l = 30.0 / kappa;
                let q = norm_quadrature(&s, l).unwrap();
                let exact = smooth_norm(&s);
                let tail = (-2.0 * kappa * l).exp() * exact;
                prop_assert!((q - exact).abs() <= 1e-8 * exact.max(1e-300) + tail + 1e-10, "{q} vs {exact}");
            }

            #[test]
            fn quadratic_roots_found_by_bisection(
                t21 in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64],
                t11 in -3.0..3.0f64,
                t12 in -3.0..3.0f64,
                t22 in -3.0..3.0f64,
            ) {
                let t = TransferMatrix::new(t11, t12, t21, t22);
                let (a, b, c) = (t21, t11 + t22, t12);
                let disc = b * b - 4.0 * a * c;
                prop_assume!(disc > 1e-6);
                let sq = disc.sqrt();
                for root in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                    if root <= 1e-6 {
                        continue;
                    }
                    let (mut lo, mut hi) = (root - 1e-3 * sq / a.abs(), root + 1e-3 * sq / a.abs());
                    let slo = bound_residual_from_matrix(&t, lo) < 0.0;
                    prop_assert!(slo != (bound_residual_from_matrix(&t, hi) < 0.0));
                    for _ in 0..200 {
                        let m = 0.5 * (lo + hi);
                        if (bound_residual_from_matrix(&t, m) < 0.0) == slo { lo = m } else { hi = m }
                    }
                    prop_assert!((0.5 * (lo + hi) - root).abs() <= 1e-10 * root.max(1.0));
                }
            }

            #[test]
            fn solved_energies_zero_the_matrix_residual(
                mu in 0.05..3.0f64, l0 in -3.0..3.0f64, e0 in 0.1..10.0f64
            ) {
                let f = CouplingFunction::exponential(l0, e0).unwrap();
                let s = bound_state(mu, &f).unwrap();
                prop_assume!((s.lambda_e.abs() - 1.0).abs() > 1e-3);
                let t = delta_delta_prime_matrix(mu, s.lambda_e).unwrap();
                prop_assert!(bound_residual_from_matrix(&t, s.kappa).abs() < 1e-10);
            }
        }
    }
}
