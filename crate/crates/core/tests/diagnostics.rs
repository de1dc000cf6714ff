//! Norms, the energy identity and the empirical constants.

use affine_vacuum::background::{AffineMotion, BackgroundProfile, Horizon, PhiSpec};
use affine_vacuum::calculus::{GridFunction, Parity, RadialGrid};
use affine_vacuum::diagnostics::{
    check_coercivity, check_norm_energy_equivalence, compute_energy_identity_terms, energy_identity_residual, fit_decay,
    sn_instant,
};
use affine_vacuum::solver::{solve, Controls, Equation, EquationOptions, InitialData, Model, PerturbationState};
use affine_vacuum::Error;
use proptest::prelude::*;

fn background(gamma: f64, n: usize, tau: f64) -> (AffineMotion, BackgroundProfile) {
    let m = AffineMotion::integrate(gamma, 1.0, 1.0, Horizon::Tau(tau), 1e-12).unwrap();
    let p = BackgroundProfile::build(&PhiSpec::cubic_bump(), gamma, &RadialGrid::new(n, 4).unwrap(), 4).unwrap();
    (m, p)
}

fn smooth_state(p: &BackgroundProfile, s: f64, tau: f64) -> PerturbationState {
    PerturbationState::new(
        tau,
        GridFunction::from_fn(p.grid(), Parity::Odd, |r| s * r * (1.0 + r * r)),
        GridFunction::from_fn(p.grid(), Parity::Odd, |r| s * (2.0 * r).sin()),
    )
}

#[test]
fn sn_of_unit_velocity_is_one_third() {
    let (m, p) = background(1.4, 256, 1.0);
    let g = p.grid();
    let st = PerturbationState::new(0.0, GridFunction::zeros(g, Parity::Odd), GridFunction::constant(g, 1.0));
    let v = sn_instant(&st, &m.at_tau(0.0).unwrap(), &p, 0).unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn zero_state_has_zero_terms() {
    let (m, p) = background(2.0, 64, 1.0);
    let rep = compute_energy_identity_terms(&PerturbationState::zero(p.grid(), 0.5), &m, &p, 2, EquationOptions::default()).unwrap();
    assert_eq!(rep.energy(), 0.0);
    assert_eq!(rep.dissipation(), 0.0);
    assert_eq!(rep.z_abs(), 0.0);
}

#[test]
fn structure_of_the_terms() {
    let (m, p) = background(1.4, 128, 1.0);
    let st = smooth_state(&p, 1e-3, 0.5);
    let rep = compute_energy_identity_terms(&st, &m, &p, 2, EquationOptions::default()).unwrap();
    assert_eq!(rep.e.len(), 3);
    // b(γ) = 0 below 5/3, and no coercive correction.
    assert!(rep.d_parts.iter().all(|p| p[1] == 0.0));
    assert_eq!(rep.correction(), 0.0);
    assert!(rep.e.iter().all(|e| *e > 0.0));
    // The top-order commutator only enters through the direct difference for N >= 3.
    assert!(!rep.c_direct);
    let rep3 = compute_energy_identity_terms(&st, &m, &p, 3, EquationOptions::default()).unwrap();
    assert!(rep3.c_direct);

    let lin = EquationOptions { model: Model::Linear, include_r3: false };
    let rep = compute_energy_identity_terms(&st, &m, &p, 2, lin).unwrap();
    for z in &rep.z {
        assert_eq!([z[1], z[2], z[4], z[6]], [0.0; 4]);
    }
}

#[test]
fn identity_residual_of_the_linear_model_converges() {
    let residual = |n: usize, si: f64| {
        let (m, p) = background(1.4, n, 2.5);
        let lin = EquationOptions { model: Model::Linear, include_r3: false };
        let init = InitialData::with_smallness(1e-3, 1e-3).build(&m, &p, 1).unwrap();
        let eq = Equation::new(&m, &p).with_options(lin);
        let c = Controls { sample_interval: si, order: 1, options: lin, reports: true, ..Controls::default() };
        let traj = solve(init, &eq, 1.0, &c).unwrap();
        let reps: Vec<_> = traj.samples.iter().filter_map(|s| s.report.clone()).collect();
        energy_identity_residual(&reps).unwrap().relative
    };
    let (a, b) = (residual(64, 0.05), residual(128, 0.025));
    assert!(b < 1e-3 && a / b > 2.0, "{a:e} {b:e}");
}

#[test]
fn identity_holds_with_the_regularization_remainder() {
    let run = |include_r3: bool, eps: f64| {
        let (m, p) = background(1.4, 128, 2.5);
        let opts = EquationOptions { model: Model::Full, include_r3 };
        let init = InitialData::with_smallness(eps, eps).build(&m, &p, 1).unwrap();
        let eq = Equation::new(&m, &p).with_options(opts);
        let c = Controls { sample_interval: 0.025, order: 1, options: opts, reports: true, ..Controls::default() };
        let traj = solve(init, &eq, 1.0, &c).unwrap();
        let reps: Vec<_> = traj.samples.iter().filter_map(|s| s.report.clone()).collect();
        (energy_identity_residual(&reps).unwrap().relative, traj.samples.last().unwrap().state.h.clone())
    };
    let gap = |eps: f64| {
        let (with, h_with) = run(true, eps);
        let (without, h_without) = run(false, eps);
        assert!(with < 1e-3 && without < 1e-3, "{with:e} {without:e}");
        (h_with - h_without).max_abs()
    };
    // The remainder is quadratic in the amplitude, which scales like sqrt(eps).
    let (a, b) = (gap(1e-3), gap(1e-4));
    assert!(b > 0.0 && (a / b - 10.0).abs() < 2.0, "{a:e} {b:e}");
}

#[test]
fn identity_residual_needs_five_samples() {
    let (m, p) = background(1.4, 32, 1.0);
    let rep = compute_energy_identity_terms(&PerturbationState::zero(p.grid(), 0.0), &m, &p, 1, EquationOptions::default()).unwrap();
    assert!(matches!(energy_identity_residual(&vec![rep; 3]), Err(Error::InsufficientSamples(_))));
}

#[test]
fn decay_fits() {
    let m = AffineMotion::integrate(5.0 / 3.0, 1.0, 1.0, Horizon::Tau(8.0), 1e-12).unwrap();
    let taus: Vec<f64> = (0..=80).map(|k| k as f64 * 0.1).collect();
    let flat: Vec<(f64, f64)> = taus.iter().map(|&t| (t, 2.5)).collect();
    assert!(fit_decay(&flat, &m).unwrap().rate.abs() < 1e-12);
    let exp: Vec<(f64, f64)> = taus.iter().map(|&t| (t, 3.0 * (-2.0 * t).exp())).collect();
    assert!((fit_decay(&exp, &m).unwrap().rate + 2.0).abs() < 1e-10);
    // a e^{-a₁ τ} tends to a constant.
    let ratio: Vec<(f64, f64)> = taus.iter().map(|&t| (t, m.at_tau(t).unwrap().a * (-m.a1_limit * t).exp())).collect();
    assert!(fit_decay(&ratio, &m).unwrap().rate.abs() < 0.05);
    assert!(matches!(fit_decay(&flat[..5], &m), Err(Error::InsufficientSamples(_))));
    let short = AffineMotion::integrate(1.4, 1.0, 1.0, Horizon::Tau(1.0), 1e-12).unwrap();
    let few: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64 * 0.1, 1.0)).collect();
    assert!(matches!(fit_decay(&few, &short), Err(Error::InsufficientSamples(_))));
}

#[test]
fn empirical_constants_of_a_small_run() {
    let (m, p) = background(1.4, 128, 3.0);
    let init = InitialData::with_smallness(1e-4, 1e-4).build(&m, &p, 2).unwrap();
    let traj = solve(init, &Equation::new(&m, &p), 2.0, &Controls { sample_interval: 0.2, ..Controls::default() }).unwrap();
    let ne = check_norm_energy_equivalence(&traj, &m, &p, 2, EquationOptions::default()).unwrap();
    assert!(!ne.trivial && ne.c1 > 0.0 && ne.c2 > 0.0 && ne.c1.is_finite() && ne.c2.is_finite());
    for i in 0..=2 {
        let c = check_coercivity(&traj, &m, &p, i).unwrap();
        assert!(c > 0.0 && c <= 10.0, "i = {i}: {c}");
    }
    let zero = solve(PerturbationState::zero(p.grid(), 0.0), &Equation::new(&m, &p), 1.0, &Controls::default()).unwrap();
    assert!(check_norm_energy_equivalence(&zero, &m, &p, 2, EquationOptions::default()).unwrap().trivial);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sn_is_quadratic(s in 1e-4f64..1e-1, k in 0.1f64..10.0, tau in 0.0f64..2.0) {
        let (m, p) = background(1.8, 64, 2.5);
        let bg = m.at_tau(tau).unwrap();
        let a = sn_instant(&smooth_state(&p, s, tau), &bg, &p, 2).unwrap();
        let b = sn_instant(&smooth_state(&p, k * s, tau), &bg, &p, 2).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((b / a - k * k).abs() <= 1e-9 * k * k);
    }

    #[test]
    fn energies_and_dissipation_are_nonnegative(s in 1e-4f64..1e-2, gamma in 1.2f64..2.4) {
        let (m, p) = background(gamma, 64, 1.0);
        let rep = compute_energy_identity_terms(&smooth_state(&p, s, 0.5), &m, &p, 2, EquationOptions::default()).unwrap();
        prop_assert!(rep.e.iter().all(|e| *e >= 0.0));
        prop_assert!(rep.d.iter().all(|d| *d >= 0.0));
        prop_assert!(rep.c.iter().all(|c| *c >= 0.0));
    }
}
