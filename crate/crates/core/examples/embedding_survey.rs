//! Empirical constants of the weighted embedding and control inequalities.

use affine_vacuum::background::{BackgroundProfile, PhiSpec};
use affine_vacuum::calculus::survey::{control_lemma_survey, embedding_survey};
use affine_vacuum::calculus::RadialGrid;

fn main() -> affine_vacuum::Result<()> {
    let grid = RadialGrid::new(128, 4)?;
    let profile = BackgroundProfile::build(&PhiSpec::cubic_bump(), 1.4, &grid, 4)?;
    let stats = embedding_survey(&profile, 200, 11)?.into_iter().chain(control_lemma_survey(&grid, 2, 200, 11)?);
    for s in stats {
        println!("{:<24} constant {:.4}  halves {:.4} / {:.4}  stable {}", s.label, s.constant, s.first_half, s.second_half, s.stable());
    }
    Ok(())
}
