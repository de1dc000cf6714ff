//! Referee solver: the radial Lagrangian equation for the flow map `χ` in
//! physical time,
//!
//! ```text
//! ρ̄ χ_tt + (χ^2 / r) ∂_r(ρ̄^γ d 𝒥^{-γ}) = 0,    𝒥 = χ^2 (χ + r χ_r),
//! ```
//!
//! kept in flux form, `χ_tt = -χ^2 (r ρ̄)^{-1} ∂_r(ρ̄^γ d 𝒥^{-γ})`.

use serde::{Deserialize, Serialize};

use crate::background::{AffineMotion, AffineSample, BackgroundProfile};
use crate::calculus::{adjoint_partial, flux_weight, weighted_norm, GridFunction, Parity, RadialGrid};
use crate::error::{Error, Result};
use crate::solver::{PerturbationState, Trajectory};
use std::sync::Arc;

/// Radial flow map `χ` and its velocity at time `t`. Both fields are even.
#[derive(Clone, Debug)]
pub struct ChiState {
    pub t: f64,
    pub chi: GridFunction,
    pub chi_t: GridFunction,
}

impl ChiState {
    pub fn new(t: f64, chi: GridFunction, chi_t: GridFunction) -> ChiState {
        ChiState { t, chi: chi.with_parity(Parity::Even), chi_t: chi_t.with_parity(Parity::Even) }
    }

    /// `χ = a(t)`, `χ_t = a'(t)`.
    pub fn affine(grid: &Arc<RadialGrid>, background: &AffineSample) -> ChiState {
        ChiState::new(background.t, GridFunction::constant(grid, background.a), GridFunction::constant(grid, background.a_t))
    }

    /// `χ = a (1 + H/r)`, `χ_t = a_t (1 + H/r) + H_τ / r` at `t = t(τ)`.
    pub fn from_h(state: &PerturbationState, motion: &AffineMotion) -> Result<ChiState> {
        let bg = motion.at_tau(state.tau)?;
        let xi = state.xi();
        let chi = xi.scale(bg.a);
        let chi_t = xi.scale(bg.a_t) + state.h_tau.over_r();
        Ok(ChiState::new(bg.t, chi, chi_t))
    }

    /// `𝒥 = χ^2 ∂_r(r χ)`, with `∂_r(r χ) = D_r(r χ) - 2 χ`.
    pub fn jacobian(&self) -> GridFunction {
        let inner = self.chi.times_r().dr() - &self.chi * 2.0;
        (&self.chi * &self.chi * inner).with_parity(Parity::Even)
    }
}

/// `χ_tt` at `state`.
///
/// The flux `ρ̄^γ d 𝒥^{-γ}` is differenced with [`adjoint_partial`], so the
/// linearisation about `χ = a` is the stable flux form of `L_0`. A spatial
/// constant `κ` is split off and its part `κ ∂_r(ρ̄^γ d) = κ ρ̄ B_0` is taken
/// from the profile, which makes affine data exact to round-off.
pub fn chi_rhs(state: &ChiState, profile: &BackgroundProfile) -> Result<GridFunction> {
    let gamma = profile.gamma();
    let grid = profile.grid();
    let jac = state.jacobian();
    if let Some((j, v)) = jac.values().iter().zip(state.chi.values()).enumerate().find(|(_, (j, c))| !(**j > 0.0) || !(**c > 0.0)) {
        return Err(Error::DegenerateFlowMap { r: grid.nodes()[j], value: *v.0 });
    }
    let jpow = jac.powf(-gamma);
    let kappa = jpow.values()[0];
    let flux = (flux_weight(profile) * jpow.map(|v| v - kappa)).with_parity(Parity::Even);
    let div = adjoint_partial(&flux) + (profile.rho_bar() * profile.b_coef(0)) * kappa;
    let vals: Vec<f64> = (0..grid.n())
        .map(|j| {
            let (c, r) = (state.chi.values()[j], grid.nodes()[j]);
            -c * c * div.values()[j] / (r * profile.rho_bar().values()[j])
        })
        .collect();
    if let Some(j) = vals.iter().position(|v| !v.is_finite()) {
        return Err(Error::BlowUp { tau: state.t, r: grid.nodes()[j] });
    }
    Ok(GridFunction::new(grid, vals, Parity::Even))
}

/// Largest sound speed, `c^2 = γ A χ^4 𝒥^{-γ-1}`.
pub fn chi_max_speed(state: &ChiState, profile: &BackgroundProfile) -> f64 {
    let gamma = profile.gamma();
    let jac = state.jacobian();
    let a = profile.a_coef();
    (0..profile.grid().n())
        .map(|j| gamma * a.values()[j] * state.chi.values()[j].powi(4) * jac.values()[j].powf(-gamma - 1.0))
        .fold(0.0, f64::max)
        .sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleControls {
    pub cfl: f64,
    /// Upper bound on the step in `t`, on top of the CFL bound.
    pub max_dt: Option<f64>,
    /// Spacing of samples when no explicit times are given.
    pub sample_interval: f64,
}

impl Default for OracleControls {
    fn default() -> Self {
        OracleControls { cfl: 0.4, max_dt: None, sample_interval: 0.05 }
    }
}

#[derive(Clone, Debug)]
pub struct ChiTrajectory {
    pub samples: Vec<ChiState>,
    pub steps: usize,
}

fn rk4(s: &ChiState, profile: &BackgroundProfile, dt: f64) -> Result<ChiState> {
    let st = |c: GridFunction, v: GridFunction, t: f64| ChiState::new(t, c, v);
    let k1v = chi_rhs(s, profile)?;
    let k1c = s.chi_t.clone();
    let s2 = st(&s.chi + &k1c * (0.5 * dt), &s.chi_t + &k1v * (0.5 * dt), s.t + 0.5 * dt);
    let k2v = chi_rhs(&s2, profile)?;
    let k2c = s2.chi_t.clone();
    let s3 = st(&s.chi + &k2c * (0.5 * dt), &s.chi_t + &k2v * (0.5 * dt), s.t + 0.5 * dt);
    let k3v = chi_rhs(&s3, profile)?;
    let k3c = s3.chi_t.clone();
    let s4 = st(&s.chi + &k3c * dt, &s.chi_t + &k3v * dt, s.t + dt);
    let k4v = chi_rhs(&s4, profile)?;
    let k4c = s4.chi_t;
    let c = dt / 6.0;
    Ok(st(
        &s.chi + (k1c + (k2c + k3c) * 2.0 + k4c) * c,
        &s.chi_t + (k1v + (k2v + k3v) * 2.0 + k4v) * c,
        s.t + dt,
    ))
}

/// Integrate from `initial` and record the state exactly at each of `times`
/// (increasing, not before `initial.t`). Every interval is split into equal
/// steps below the CFL bound.
pub fn solve_chi_at(initial: ChiState, profile: &BackgroundProfile, times: &[f64], controls: &OracleControls) -> Result<ChiTrajectory> {
    if !(controls.cfl > 0.0) {
        return Err(Error::InvalidParameter("cfl must be positive".into()));
    }
    let mut state = initial;
    let mut samples = Vec::with_capacity(times.len());
    let mut steps = 0;
    for &target in times {
        let span = target - state.t;
        if span < -1e-12 {
            return Err(Error::InvalidParameter(format!("sample time {target} precedes t = {}", state.t)));
        }
        if span > 1e-14 {
            let c = chi_max_speed(&state, profile);
            let mut dt = if c > 0.0 { controls.cfl * profile.grid().h() / c } else { span };
            if let Some(m) = controls.max_dt {
                dt = dt.min(m);
            }
            let k = ((span / dt) - 1e-9).ceil().max(1.0) as usize;
            let h = span / k as f64;
            for _ in 0..k {
                state = rk4(&state, profile, h)?;
                steps += 1;
            }
        }
        state.t = target;
        samples.push(state.clone());
    }
    Ok(ChiTrajectory { samples, steps })
}

/// Integrate to `t_final`, sampling every `controls.sample_interval`.
pub fn solve_chi(initial: ChiState, profile: &BackgroundProfile, t_final: f64, controls: &OracleControls) -> Result<ChiTrajectory> {
    let span = t_final - initial.t;
    if !(span > 0.0) || !(controls.sample_interval > 0.0) {
        return Err(Error::InvalidParameter(format!("t_final = {t_final} must exceed t0 = {}", initial.t)));
    }
    let k = ((span / controls.sample_interval) - 1e-9).ceil().max(1.0) as usize;
    let t0 = initial.t;
    let times: Vec<f64> = (0..=k).map(|i| t0 + span * i as f64 / k as f64).collect();
    solve_chi_at(initial, profile, &times, controls)
}

/// Run the referee at the physical times of every sample of `h_trajectory`.
pub fn solve_chi_matching(
    h_trajectory: &Trajectory,
    motion: &AffineMotion,
    profile: &BackgroundProfile,
    controls: &OracleControls,
) -> Result<ChiTrajectory> {
    let first = h_trajectory.samples.first().ok_or_else(|| Error::InsufficientSamples("empty trajectory".into()))?;
    let initial = ChiState::from_h(&first.state, motion)?;
    let times = h_trajectory
        .samples
        .iter()
        .map(|s| motion.t_of_tau(s.state.tau))
        .collect::<Result<Vec<_>>>()?;
    solve_chi_at(initial, profile, &times, controls)
}

/// Agreement of the two formulations over a common window.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub samples: usize,
    /// `max_t ‖χ_H - χ‖_∞ / ‖χ‖_∞`.
    pub rel_sup: f64,
    /// `max_t ‖χ_H - χ‖_0 / ‖χ‖_0`.
    pub rel_l2: f64,
    /// `max_t ‖χ_H - χ‖_∞ / max_t ‖χ - a‖_∞`.
    pub rel_perturbation: f64,
    /// `(t, ‖χ_H - χ‖_∞)`.
    pub pointwise: Vec<(f64, f64)>,
}

/// Map `h_trajectory` to `χ = a(1 + H/r)` and compare sample by sample with
/// `chi`. Times must agree to `1e-9`.
pub fn compare_solutions(
    chi: &ChiTrajectory,
    h_trajectory: &Trajectory,
    motion: &AffineMotion,
    profile: &BackgroundProfile,
) -> Result<DiscrepancyReport> {
    if chi.samples.len() != h_trajectory.samples.len() || chi.samples.is_empty() {
        return Err(Error::WindowMismatch(format!(
            "{} referee samples against {} H samples",
            chi.samples.len(),
            h_trajectory.samples.len()
        )));
    }
    let (mut rel_sup, mut rel_l2, mut pert, mut abs_max) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut pointwise = Vec::with_capacity(chi.samples.len());
    for (c, h) in chi.samples.iter().zip(&h_trajectory.samples) {
        let bg = motion.at_tau(h.state.tau)?;
        if (bg.t - c.t).abs() > 1e-9 * bg.t.abs().max(1.0) {
            return Err(Error::WindowMismatch(format!("t = {} against t(tau) = {}", c.t, bg.t)));
        }
        let mapped = h.state.xi().scale(bg.a).with_parity(Parity::Even);
        let diff = &mapped - &c.chi;
        let e = diff.max_abs();
        abs_max = abs_max.max(e);
        rel_sup = rel_sup.max(e / c.chi.max_abs());
        rel_l2 = rel_l2.max((weighted_norm(&diff, 0, profile) / weighted_norm(&c.chi, 0, profile)).sqrt());
        pert = pert.max(c.chi.map(|v| v - bg.a).max_abs());
        pointwise.push((c.t, e));
    }
    let rel_perturbation = if pert > 0.0 { abs_max / pert } else { 0.0 };
    Ok(DiscrepancyReport { samples: pointwise.len(), rel_sup, rel_l2, rel_perturbation, pointwise })
}
