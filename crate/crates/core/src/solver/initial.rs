//! Smooth initial data `H_0 = s r p(r^2)`, `∂_τ H_0 = s r q(r^2)`.

use serde::{Deserialize, Serialize};

use super::state::PerturbationState;
use crate::background::{AffineMotion, BackgroundProfile};
use crate::calculus::{weighted_norm, GridFunction, Parity};
use crate::diagnostics::sn_instant;
use crate::error::{Error, Result};

/// Initial-data family. `θ_0 = s Σ c_i r^{2i}` and `θ_τ(0) = s Σ b_i r^{2i}`;
/// the amplitude `s` is either given or chosen as the largest value with
/// `𝒮^N(0) <= ε` and `‖H_0‖_0^2 <= λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default = "default_theta")]
    pub theta: Vec<f64>,
    #[serde(default = "default_theta_tau")]
    pub theta_tau: Vec<f64>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub lambda: f64,
    /// Fixed amplitude overriding `epsilon` and `lambda`.
    #[serde(default)]
    pub amplitude: Option<f64>,
}

fn default_theta() -> Vec<f64> {
    vec![0.5, 1.0, -0.75]
}

fn default_theta_tau() -> Vec<f64> {
    vec![0.0, -0.5, 0.25]
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData { theta: default_theta(), theta_tau: default_theta_tau(), epsilon: 0.0, lambda: 0.0, amplitude: None }
    }
}

fn even_poly(c: &[f64], r: f64) -> f64 {
    let r2 = r * r;
    c.iter().rev().fold(0.0, |acc, ci| acc * r2 + ci)
}

impl InitialData {
    pub fn with_smallness(epsilon: f64, lambda: f64) -> InitialData {
        InitialData { epsilon, lambda, ..InitialData::default() }
    }

    pub fn with_amplitude(amplitude: f64) -> InitialData {
        InitialData { amplitude: Some(amplitude), ..InitialData::default() }
    }

    /// Build the state at `τ = 0` for order `n_order`.
    pub fn build(&self, motion: &AffineMotion, profile: &BackgroundProfile, n_order: usize) -> Result<PerturbationState> {
        let grid = profile.grid();
        if self.epsilon < 0.0 || self.lambda < 0.0 || !self.epsilon.is_finite() || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter("epsilon and lambda must be finite and nonnegative".into()));
        }
        let unit = PerturbationState::new(
            0.0,
            GridFunction::from_fn(grid, Parity::Odd, |r| r * even_poly(&self.theta, r)),
            GridFunction::from_fn(grid, Parity::Odd, |r| r * even_poly(&self.theta_tau, r)),
        );
        let s = match self.amplitude {
            Some(s) => s,
            None => {
                let s1 = sn_instant(&unit, &motion.at_tau(0.0)?, profile, n_order)?;
                let l1 = weighted_norm(&unit.h, 0, profile);
                let by_eps = if s1 > 0.0 { (self.epsilon / s1).sqrt() } else { f64::INFINITY };
                let by_lambda = if l1 > 0.0 { (self.lambda / l1).sqrt() } else { f64::INFINITY };
                let s = by_eps.min(by_lambda);
                if s.is_finite() { s } else { 0.0 }
            }
        };
        Ok(PerturbationState::new(0.0, unit.h.scale(s), unit.h_tau.scale(s)))
    }
}
