//! The χ formulation as a referee for the `H` solver.

use affine_vacuum::background::{AffineMotion, BackgroundProfile, Horizon, PhiSpec};
use affine_vacuum::calculus::RadialGrid;
use affine_vacuum::oracle::{compare_solutions, solve_chi, solve_chi_at, solve_chi_matching, ChiState, OracleControls};
use affine_vacuum::solver::{solve, Controls, Equation, InitialData, PerturbationState};
use affine_vacuum::Error;
use proptest::prelude::*;

fn background(gamma: f64, n: usize) -> (AffineMotion, BackgroundProfile) {
    let m = AffineMotion::integrate(gamma, 1.0, 1.0, Horizon::Time(1.6), 1e-12).unwrap();
    let p = BackgroundProfile::build(&PhiSpec::cubic_bump(), gamma, &RadialGrid::new(n, 4).unwrap(), 4).unwrap();
    (m, p)
}

fn discrepancy(n: usize) -> f64 {
    let (m, p) = background(1.4, n);
    let init = InitialData::with_smallness(1e-3, 1e-3).build(&m, &p, 2).unwrap();
    let tau1 = m.tau_of_t(1.0).unwrap();
    let traj = solve(init, &Equation::new(&m, &p), tau1, &Controls { sample_interval: tau1 / 5.0, ..Controls::default() }).unwrap();
    let chi = solve_chi_matching(&traj, &m, &p, &OracleControls::default()).unwrap();
    compare_solutions(&chi, &traj, &m, &p).unwrap().rel_perturbation
}

#[test]
fn formulations_agree_and_converge() {
    let (a, b) = (discrepancy(64), discrepancy(128));
    assert!(b <= 1e-6, "{b:e}");
    assert!(a / b >= 4.0, "{a:e} {b:e}");
}

#[test]
fn mismatched_windows_are_rejected() {
    let (m, p) = background(1.4, 32);
    let traj = solve(PerturbationState::zero(p.grid(), 0.0), &Equation::new(&m, &p), 0.5, &Controls::default()).unwrap();
    let chi = solve_chi(ChiState::affine(p.grid(), &m.at_t(0.0).unwrap()), &p, 0.3, &OracleControls::default()).unwrap();
    assert!(matches!(compare_solutions(&chi, &traj, &m, &p), Err(Error::WindowMismatch(_))));
}

#[test]
fn sample_times_must_increase() {
    let (m, p) = background(1.4, 32);
    let chi0 = ChiState::affine(p.grid(), &m.at_t(0.5).unwrap());
    assert!(solve_chi_at(chi0, &p, &[0.2], &OracleControls::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn spatially_constant_data_follows_the_affine_motion(gamma in 1.1f64..2.5) {
        let (m, p) = background(gamma, 64);
        let chi0 = ChiState::affine(p.grid(), &m.at_t(0.0).unwrap());
        let traj = solve_chi(chi0, &p, 1.5, &OracleControls::default()).unwrap();
        for s in &traj.samples {
            let a = m.at_t(s.t).unwrap().a;
            prop_assert!(s.chi.map(|v| v - a).max_abs() <= 1e-8 * a);
            prop_assert!(s.jacobian().map(|j| j - a.powi(3)).max_abs() <= 1e-8 * a.powi(3));
        }
    }
}
