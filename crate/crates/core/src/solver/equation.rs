//! Right-hand side of the `H` equation and the RK4 step.
//!
//! ```text
//! H_ττ = a^{3-3γ} [ γ e L_0 H + H + H^2/r - r R1 - r R2 ] - (a_τ / a) H_τ
//! ```
//!
//! with `e = ξ^4 𝒥^{-γ-1}` and `L_0 H = ρ̄^{-1} ∂_r(ρ̄^γ d D_r H)` in flux
//! form (see [`apply_l0_flux`]).

use serde::{Deserialize, Serialize};

use super::remainders::{check_jacobian, remainders_from_geometry};
use super::state::{Geometry, PerturbationState};
use crate::background::{AffineMotion, AffineSample, BackgroundProfile};
use crate::calculus::{apply_l0_flux, GridFunction, Parity};
use crate::error::{Error, Result};

/// Which terms of the equation are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// The full nonlinear equation.
    #[default]
    Full,
    /// Linearisation about the affine motion: `e = 1`, no `H^2/r`, no remainders.
    Linear,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationOptions {
    #[serde(default)]
    pub model: Model,
    /// Add `-r R3` to the bracket, as in the zeroth-order energy identity.
    #[serde(default)]
    pub include_r3: bool,
}

/// An additive source `S(τ, r)` in `H_ττ = rhs(H) + S`.
pub trait Forcing: Sync {
    fn source(&self, tau: f64, background: &AffineSample, profile: &BackgroundProfile) -> GridFunction;
}

/// Nodal inputs of the right-hand side. The discrete path fills them by
/// differencing; manufactured solutions fill them exactly.
#[derive(Clone, Debug)]
pub struct RhsFields {
    pub h: GridFunction,
    pub h_tau: GridFunction,
    pub theta: GridFunction,
    pub theta_r: GridFunction,
    /// `D_r H`.
    pub dr_h: GridFunction,
    /// `L_0 H`.
    pub l0: GridFunction,
}

impl RhsFields {
    /// Discrete fields of `H`, with `L_0 H` in flux form.
    pub fn from_h(h: &GridFunction, h_tau: &GridFunction, profile: &BackgroundProfile) -> RhsFields {
        let theta = h.over_r();
        let theta_r = theta.partial();
        let dr_h = h.dr();
        let l0 = apply_l0_flux(h, profile);
        RhsFields { h: h.clone(), h_tau: h_tau.clone(), theta, theta_r, dr_h, l0 }
    }

    pub fn from_state(state: &PerturbationState, profile: &BackgroundProfile) -> RhsFields {
        RhsFields::from_h(&state.h, &state.h_tau, profile)
    }
}

/// Evaluate `H_ττ` from nodal fields.
pub fn rhs_from_fields(
    fields: &RhsFields,
    background: &AffineSample,
    profile: &BackgroundProfile,
    options: EquationOptions,
) -> GridFunction {
    let gamma = profile.gamma();
    let w = background.a.powf(3.0 - 3.0 * gamma);
    let damp = background.a_tau / background.a;
    let l0 = &fields.l0;
    let bracket = match options.model {
        Model::Linear => l0 * gamma + &fields.h,
        Model::Full => {
            let geo = Geometry::from_theta(gamma, fields.theta.clone(), fields.theta_r.clone());
            let rem = remainders_from_geometry(&geo, &profile.a_coef(), gamma);
            let mut rr = &rem.r1 + &rem.r2;
            if options.include_r3 {
                rr = rr + &rem.r3;
            }
            (&geo.e * l0) * gamma + &fields.h + &fields.h * &fields.theta - rr.times_r()
        }
    };
    (bracket * w - &fields.h_tau * damp).with_parity(Parity::Odd)
}

/// The evolution problem: background, profile, options and optional source.
#[derive(Clone, Copy)]
pub struct Equation<'a> {
    pub motion: &'a AffineMotion,
    pub profile: &'a BackgroundProfile,
    pub options: EquationOptions,
    pub forcing: Option<&'a dyn Forcing>,
}

/// Jacobian floor below which a run is declared blown up.
pub const JACOBIAN_FLOOR: f64 = 1e-6;

impl<'a> Equation<'a> {
    pub fn new(motion: &'a AffineMotion, profile: &'a BackgroundProfile) -> Equation<'a> {
        Equation { motion, profile, options: EquationOptions::default(), forcing: None }
    }

    pub fn with_options(mut self, options: EquationOptions) -> Equation<'a> {
        self.options = options;
        self
    }

    pub fn with_forcing(mut self, forcing: &'a dyn Forcing) -> Equation<'a> {
        self.forcing = Some(forcing);
        self
    }

    /// `H_ττ` at `state`.
    pub fn rhs(&self, state: &PerturbationState) -> Result<GridFunction> {
        let bg = self.motion.at_tau(state.tau)?;
        self.check_state(state)?;
        let fields = RhsFields::from_state(state, self.profile);
        let mut out = rhs_from_fields(&fields, &bg, self.profile, self.options);
        if let Some(f) = self.forcing {
            out = out + f.source(state.tau, &bg, self.profile);
        }
        if let Some(j) = out.first_non_finite() {
            return Err(Error::BlowUp { tau: state.tau, r: state.grid().nodes()[j] });
        }
        Ok(out)
    }

    fn check_state(&self, state: &PerturbationState) -> Result<()> {
        let nodes = state.grid().nodes();
        for f in [&state.h, &state.h_tau] {
            if let Some(j) = f.first_non_finite() {
                return Err(Error::BlowUp { tau: state.tau, r: nodes[j] });
            }
        }
        if self.options.model == Model::Full {
            let geo = state.geometry(self.profile.gamma());
            check_jacobian(&geo, state)?;
            if let Some(j) = geo.jac.values().iter().position(|v| *v < JACOBIAN_FLOOR) {
                return Err(Error::BlowUp { tau: state.tau, r: nodes[j] });
            }
        }
        Ok(())
    }

    /// Largest sound speed `c_max`, `c^2 = γ a^{3-3γ} ρ̄^{γ-1} d e`.
    pub fn max_speed(&self, state: &PerturbationState) -> Result<f64> {
        let gamma = self.profile.gamma();
        let bg = self.motion.at_tau(state.tau)?;
        let a_coef = self.profile.a_coef();
        let peak = match self.options.model {
            Model::Linear => a_coef.max_abs(),
            Model::Full => (&a_coef * &state.geometry(gamma).e).max_abs(),
        };
        Ok((gamma * bg.a.powf(3.0 - 3.0 * gamma) * peak).sqrt())
    }

    /// CFL bound `cfl h / c_max` on the step.
    pub fn cfl_limit(&self, state: &PerturbationState, cfl: f64) -> Result<f64> {
        let c = self.max_speed(state)?;
        Ok(if c > 0.0 { cfl * state.grid().h() / c } else { f64::INFINITY })
    }

    /// One classical RK4 step of size `dtau`; rejected if it exceeds the CFL bound.
    pub fn step(&self, state: &PerturbationState, dtau: f64, cfl: f64) -> Result<PerturbationState> {
        let limit = self.cfl_limit(state, cfl)?;
        if !(dtau > 0.0) || dtau > limit * (1.0 + 1e-9) {
            return Err(Error::StepRejected { dtau, limit });
        }
        self.rk4(state, dtau)
    }

    pub(crate) fn rk4(&self, s: &PerturbationState, dt: f64) -> Result<PerturbationState> {
        let stage = |h: GridFunction, v: GridFunction, t: f64| PerturbationState::new(t, h, v);
        let k1v = self.rhs(s)?;
        let k1h = s.h_tau.clone();
        let s2 = stage(&s.h + &k1h * (0.5 * dt), &s.h_tau + &k1v * (0.5 * dt), s.tau + 0.5 * dt);
        let k2v = self.rhs(&s2)?;
        let k2h = s2.h_tau.clone();
        let s3 = stage(&s.h + &k2h * (0.5 * dt), &s.h_tau + &k2v * (0.5 * dt), s.tau + 0.5 * dt);
        let k3v = self.rhs(&s3)?;
        let k3h = s3.h_tau.clone();
        let s4 = stage(&s.h + &k3h * dt, &s.h_tau + &k3v * dt, s.tau + dt);
        let k4v = self.rhs(&s4)?;
        let k4h = s4.h_tau;
        let c = dt / 6.0;
        let h = &s.h + (k1h + (k2h + k3h) * 2.0 + k4h) * c;
        let v = &s.h_tau + (k1v + (k2v + k3v) * 2.0 + k4v) * c;
        Ok(PerturbationState::new(s.tau + dt, h, v))
    }
}

/// `H_ττ` for the full equation without source.
pub fn rhs_h(state: &PerturbationState, motion: &AffineMotion, profile: &BackgroundProfile) -> Result<GridFunction> {
    Equation::new(motion, profile).rhs(state)
}

/// One RK4 step of the full equation with the default CFL constant 0.4.
pub fn step(state: &PerturbationState, motion: &AffineMotion, profile: &BackgroundProfile, dtau: f64) -> Result<PerturbationState> {
    Equation::new(motion, profile).step(state, dtau, 0.4)
}

/// `θ_ττ` assembled from the `θ` form of the equation, differencing `θ`
/// directly; `r θ_ττ` must agree with `H_ττ`.
pub fn rhs_theta(state: &PerturbationState, motion: &AffineMotion, profile: &BackgroundProfile) -> Result<GridFunction> {
    let gamma = profile.gamma();
    let bg = motion.at_tau(state.tau)?;
    let theta = state.theta();
    let theta_tau = state.h_tau.over_r();
    let theta_r = theta.partial();
    let geo = Geometry::from_theta(gamma, theta.clone(), theta_r.clone());
    let rem = remainders_from_geometry(&geo, &profile.a_coef(), gamma);
    // r^{-2} ∂_r(r^3 θ) = 3θ + r θ_r, and the elliptic term is
    // γ e (r ρ̄)^{-1} ∂_r(ρ̄^γ d (3θ + r θ_r)).
    let flux_arg = &theta * 3.0 + theta_r.times_r();
    let l = (profile.a_coef() * flux_arg.partial() + profile.b_coef(0) * &flux_arg).over_r();
    let bracket = (&geo.e * &l) * gamma + &theta * theta.map(|t| 1.0 + t) - &rem.r1 - &rem.r2;
    Ok(bracket * bg.a.powf(3.0 - 3.0 * gamma) - theta_tau * (bg.a_tau / bg.a))
}
