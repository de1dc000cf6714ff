//! Empirical constants over random smooth functions: the control lemma for
//! `𝒫_i` against `𝒟_i` near the origin, and the weighted `L^∞` embedding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

use super::cutoff::psi;
use super::grid::{GridFunction, Parity, RadialGrid};
use super::words::{enumerate_p, WordClass};
use crate::background::BackgroundProfile;
use crate::error::{Error, Result};

/// Number of modes in [`random_odd_trig`].
pub const TRIG_MODES: usize = 6;

/// Maxima of one empirical ratio over two halves of the draws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyStat {
    pub label: String,
    pub order: usize,
    pub draws: usize,
    /// Largest ratio over all draws: the empirical constant.
    pub constant: f64,
    pub first_half: f64,
    pub second_half: f64,
}

impl SurveyStat {
    fn from_ratios(label: String, order: usize, ratios: &[f64]) -> SurveyStat {
        let half = ratios.len() / 2;
        let max = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
        SurveyStat {
            label,
            order,
            draws: ratios.len(),
            constant: max(ratios),
            first_half: max(&ratios[..half]),
            second_half: max(&ratios[half..]),
        }
    }

    pub fn finite(&self) -> bool {
        self.constant.is_finite() && self.constant > 0.0
    }

    /// The two halves agree within a factor of two.
    pub fn stable(&self) -> bool {
        let (lo, hi) = (self.first_half.min(self.second_half), self.first_half.max(self.second_half));
        self.finite() && lo > 0.0 && hi <= 2.0 * lo
    }
}

/// `Σ_{k=1}^{6} c_k sin(k r)` with `c_k` uniform in `[-1, 1]`.
pub fn random_odd_trig(grid: &Arc<RadialGrid>, rng: &mut impl Rng) -> GridFunction {
    let c: Vec<f64> = (0..TRIG_MODES).map(|_| rng.random_range(-1.0..=1.0)).collect();
    GridFunction::from_fn(grid, Parity::Odd, |r| {
        c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * r).sin()).sum()
    })
}

fn check_draws(draws: usize) -> Result<()> {
    if draws < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 draws, got {draws}")));
    }
    Ok(())
}

/// For `i = 1..=i_max`, the ratio
/// `Σ_{𝔇 ∈ 𝒫_i} ∫_0^{3/4} |𝔇 X|^2 r^2 ψ^2 dr / ∫_0^{3/4} |𝒟_i X|^2 r^2 ψ^2 dr`.
pub fn control_lemma_survey(grid: &Arc<RadialGrid>, i_max: usize, draws: usize, seed: u64) -> Result<Vec<SurveyStat>> {
    check_draws(draws)?;
    let words: Vec<_> = (1..=i_max).map(|i| enumerate_p(i, WordClass::P)).collect::<Result<_>>()?;
    let w: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(grid.quad_r2_weights())
        .map(|(r, q)| q * psi(*r).powi(2))
        .collect();
    let integral = |f: &GridFunction| -> f64 { f.values().iter().zip(&w).map(|(v, w)| v * v * w).sum() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = vec![Vec::with_capacity(draws); i_max];
    for _ in 0..draws {
        let x = random_odd_trig(grid, &mut rng);
        for i in 1..=i_max {
            let den = integral(&x.di(i)?);
            let num: f64 = words[i - 1].iter().map(|word| integral(&word.apply(&x))).sum();
            ratios[i - 1].push(num / den);
        }
    }
    Ok(ratios
        .iter()
        .enumerate()
        .map(|(k, r)| SurveyStat::from_ratios(format!("control i={}", k + 1), k + 1, r))
        .collect())
}

/// For `m ∈ {1, 2}`, the ratio of `‖u‖_∞^2` to
/// `Σ_{k=1,2} ∫_0^{3/4} |𝒟_k u|^2 r^2 dr + Σ_{k=0}^{m+1} ∫_{1/4}^1 d^{2m} |𝒟_k u|^2 dr`,
/// with midpoint sums over cells whose faces fall on `1/4` and `3/4`.
pub fn embedding_survey(profile: &BackgroundProfile, draws: usize, seed: u64) -> Result<Vec<SurveyStat>> {
    check_draws(draws)?;
    let grid = profile.grid();
    if !grid.n().is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!("cell count {} must be divisible by 4", grid.n())));
    }
    let h = grid.h();
    let nodes = grid.nodes();
    let d = profile.d_weight().values();
    let inner: Vec<f64> = nodes.iter().map(|r| if *r < 0.75 { h * r * r } else { 0.0 }).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = [Vec::with_capacity(draws), Vec::with_capacity(draws)];
    for _ in 0..draws {
        let u = random_odd_trig(grid, &mut rng);
        let derivs: Vec<GridFunction> = (0..=3).map(|k| u.di(k)).collect::<Result<_>>()?;
        let sq = |f: &GridFunction, w: &[f64]| -> f64 { f.values().iter().zip(w).map(|(v, w)| v * v * w).sum() };
        let near = sq(&derivs[1], &inner) + sq(&derivs[2], &inner);
        for m in 1..=2usize {
            let outer: Vec<f64> = nodes
                .iter()
                .zip(d)
                .map(|(r, dj)| if *r > 0.25 { h * dj.powi(2 * m as i32) } else { 0.0 })
                .collect();
            let far: f64 = (0..=m + 1).map(|k| sq(&derivs[k], &outer)).sum();
            ratios[m - 1].push(u.max_abs().powi(2) / (near + far));
        }
    }
    Ok(ratios
        .iter()
        .enumerate()
        .map(|(k, r)| SurveyStat::from_ratios(format!("embedding m={}", k + 1), k + 1, r))
        .collect())
}
