//! Record energy reports along a trajectory and check the identity
//! d/dtau E = -D + Z numerically.

use affine_vacuum::background::{AffineMotion, BackgroundProfile, Horizon, PhiSpec};
use affine_vacuum::calculus::RadialGrid;
use affine_vacuum::diagnostics::energy_identity_residual;
use affine_vacuum::solver::{solve, Controls, Equation, InitialData};

fn main() -> affine_vacuum::Result<()> {
    let gamma = 1.4;
    let motion = AffineMotion::integrate(gamma, 1.0, 1.0, Horizon::Tau(2.0), 1e-12)?;
    for n in [64, 128, 256] {
        let profile = BackgroundProfile::build(&PhiSpec::cubic_bump(), gamma, &RadialGrid::new(n, 4)?, 4)?;
        let init = InitialData::with_smallness(1e-3, 1e-3).build(&motion, &profile, 2)?;
        let controls = Controls { sample_interval: 0.02 * 64.0 / n as f64, reports: true, ..Controls::default() };
        let traj = solve(init, &Equation::new(&motion, &profile), 2.0, &controls)?;
        let reports: Vec<_> = traj.samples.iter().filter_map(|s| s.report.clone()).collect();
        let res = energy_identity_residual(&reports)?;
        let last = reports.last().unwrap();
        println!("n = {n:4}  relative residual {:.3e}  E = {:.4e}  D = {:.4e}", res.relative, last.energy(), last.dissipation());
    }
    Ok(())
}
