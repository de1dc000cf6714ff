//! Build the density profile and weight for each profile in the corpus and
//! report the balance residual and the boundary slope of the weight.

use affine_vacuum::background::{BackgroundProfile, PhiSpec};
use affine_vacuum::calculus::RadialGrid;

fn main() -> affine_vacuum::Result<()> {
    let grid = RadialGrid::new(256, 4)?;
    for (label, spec) in PhiSpec::corpus() {
        let p = BackgroundProfile::build(&spec, 1.4, &grid, 4)?;
        println!(
            "{label:>10}  max rho = {:.4}  d(1) = {:.2e}  slope = {:.5}  balance = {:.2e}",
            p.rho_bar().max_abs(),
            p.d_at_boundary(),
            p.boundary_slope(),
            p.balance_residual().max_abs()
        );
    }
    Ok(())
}
