use serde::Serialize;

use super::energy::compute_energy_identity_terms;
use crate::background::{line_fit, AffineMotion, BackgroundProfile};
use crate::calculus::weighted_norm;
use crate::error::{Error, Result};
use crate::solver::{EquationOptions, Trajectory};

/// Empirical constants of `C1 𝒮^N(τ) <= sup (ℰ^N + 𝒞^{N-1}) <= C2 (𝒮^N(τ) + 𝒮^N(0))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEnergyConstants {
    pub c1: f64,
    pub c2: f64,
    /// The trajectory is identically zero; both sides vanish.
    pub trivial: bool,
}

pub fn check_norm_energy_equivalence(
    trajectory: &Trajectory,
    motion: &AffineMotion,
    profile: &BackgroundProfile,
    n: usize,
    options: EquationOptions,
) -> Result<NormEnergyConstants> {
    if trajectory.samples.is_empty() {
        return Err(Error::InsufficientSamples("empty trajectory".into()));
    }
    let (mut sup_e, mut sup_s) = (0.0f64, 0.0f64);
    let mut s0 = None;
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    for smp in &trajectory.samples {
        let rep = compute_energy_identity_terms(&smp.state, motion, profile, n, options)?;
        sup_e = sup_e.max(rep.energy() + rep.correction());
        sup_s = sup_s.max(rep.sn);
        let s0 = *s0.get_or_insert(rep.sn);
        if sup_s > 0.0 {
            c1 = c1.min(sup_e / sup_s);
            c2 = c2.max(sup_e / (sup_s + s0));
        }
    }
    if sup_s == 0.0 {
        return Ok(NormEnergyConstants { c1: 0.0, c2: 0.0, trivial: true });
    }
    Ok(NormEnergyConstants { c1, c2, trivial: false })
}

/// `max_τ ‖𝒟_i H‖_i^2 / (sup_{τ' <= τ} a^2 ‖𝒟_i H_τ‖_i^2 + ‖𝒟_i H(0)‖_i^2)`.
pub fn check_coercivity(trajectory: &Trajectory, motion: &AffineMotion, profile: &BackgroundProfile, i: usize) -> Result<f64> {
    let mut sup_v = 0.0f64;
    let mut init = None;
    let mut worst = 0.0f64;
    for smp in &trajectory.samples {
        let a = motion.at_tau(smp.state.tau)?.a;
        let lhs = weighted_norm(&smp.state.h.di(i)?, i, profile);
        let h0 = *init.get_or_insert(lhs);
        sup_v = sup_v.max(a * a * weighted_norm(&smp.state.h_tau.di(i)?, i, profile));
        let rhs = sup_v + h0;
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(worst)
}

/// Log-linear fit of a positive series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    /// Fitted `κ` in `value ≈ C e^{κ τ}`.
    pub rate: f64,
    pub intercept: f64,
    /// `a_0` of the background.
    pub a0: f64,
    /// `κ / (-a_0)`; 1 means decay exactly at `e^{-a_0 τ}`.
    pub relative_to_a0: f64,
    /// Samples used in the fit.
    pub used: usize,
}

/// Fit the last half of `(τ, value)`. Needs at least ten samples spanning
/// three e-folds of `a`.
pub fn fit_decay(series: &[(f64, f64)], motion: &AffineMotion) -> Result<DecayFit> {
    if series.len() < 10 {
        return Err(Error::InsufficientSamples(format!("{} samples, need 10", series.len())));
    }
    let (t0, t1) = (series[0].0, series[series.len() - 1].0);
    let folds = (motion.at_tau(t1)?.a / motion.at_tau(t0)?.a).ln();
    if folds < 3.0 {
        return Err(Error::InsufficientSamples(format!("a grows by {folds:.3} e-folds, need 3")));
    }
    let tail = &series[series.len() / 2..];
    if tail.iter().any(|(_, v)| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("decay fit needs a positive series".into()));
    }
    let xs: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1.ln()).collect();
    let (intercept, rate) = line_fit(&xs, &ys);
    let a0 = motion.a0_rate;
    Ok(DecayFit { rate, intercept, a0, relative_to_a0: if a0 != 0.0 { -rate / a0 } else { f64::NAN }, used: tail.len() })
}
