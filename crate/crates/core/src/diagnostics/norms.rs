use crate::background::{AffineMotion, AffineSample, BackgroundProfile};
use crate::calculus::{weighted_norm, GridFunction};
use crate::error::{Error, Result};
use crate::solver::{PerturbationState, Trajectory};

/// `𝒮^N` at one instant, before taking the running supremum:
///
/// ```text
/// Σ_{i<=N} a^d ‖𝒟_i H_τ‖_i^2 + Σ_{i<N} ‖𝒟_{i+1} H‖_{i+1}^2 + a^b ‖𝒟_{N+1} H‖_{N+1}^2
/// ```
pub fn sn_instant(state: &PerturbationState, background: &AffineSample, profile: &BackgroundProfile, n: usize) -> Result<f64> {
    let ex = crate::background::gamma_exponents(profile.gamma())?;
    let a = background.a;
    let mut total = 0.0;
    for i in 0..=n {
        total += a.powf(ex.d_exp) * weighted_norm(&state.h_tau.di(i)?, i, profile);
    }
    for i in 0..n {
        total += weighted_norm(&state.h.di(i + 1)?, i + 1, profile);
    }
    total += a.powf(ex.b_exp) * weighted_norm(&state.h.di(n + 1)?, n + 1, profile);
    Ok(total)
}

/// Running supremum of `𝒮^N` at every sample of `trajectory`.
pub fn sn_series(trajectory: &Trajectory, motion: &AffineMotion, profile: &BackgroundProfile, n: usize) -> Result<Vec<(f64, f64)>> {
    if trajectory.samples.is_empty() {
        return Err(Error::InsufficientSamples("empty trajectory".into()));
    }
    let mut sup: f64 = 0.0;
    trajectory
        .samples
        .iter()
        .map(|s| {
            let bg = motion.at_tau(s.state.tau)?;
            sup = sup.max(sn_instant(&s.state, &bg, profile, n)?);
            Ok((s.state.tau, sup))
        })
        .collect()
}

/// `𝒮^N` at the end of `trajectory`.
pub fn compute_sn(trajectory: &Trajectory, motion: &AffineMotion, profile: &BackgroundProfile, n: usize) -> Result<f64> {
    Ok(sn_series(trajectory, motion, profile, n)?.last().map_or(0.0, |p| p.1))
}

/// `∫_0^1 f · weight · r^2 dr` with the grid's quadrature.
pub(crate) fn quad(f: &GridFunction, weight: &[f64]) -> f64 {
    f.values()
        .iter()
        .zip(weight)
        .zip(f.grid().quad_r2_weights())
        .map(|((v, w), q)| v * w * q)
        .sum()
}
