//! Run the local well-posedness iteration and print the contraction ratios.

use affine_vacuum::background::{AffineMotion, BackgroundProfile, Horizon, PhiSpec};
use affine_vacuum::calculus::RadialGrid;
use affine_vacuum::solver::{lwp_iterate, InitialData, LwpControls};

fn main() -> affine_vacuum::Result<()> {
    let gamma = 1.4;
    let motion = AffineMotion::integrate(gamma, 1.0, 1.0, Horizon::Tau(1.0), 1e-12)?;
    let profile = BackgroundProfile::build(&PhiSpec::cubic_bump(), gamma, &RadialGrid::new(128, 4)?, 4)?;
    let init = InitialData::with_smallness(1e-3, 1e-3).build(&motion, &profile, 2)?;
    let res = lwp_iterate(&init, &motion, &profile, &LwpControls::default())?;
    for step in &res.history {
        let ratio = step.ratio.map_or("-".to_string(), |q| format!("{q:.4}"));
        println!("iterate {:2}  difference {:.3e}  ratio {ratio}", step.iterate, step.difference);
    }
    println!("converged: {}  reconstruction residual {:.2e}", res.converged, res.reconstruction_residual);
    Ok(())
}
