//! Manufactured solution `H* = ε e^{-τ} r (1 - r^2)` with its exact source.

use super::equation::{rhs_from_fields, EquationOptions, Forcing, RhsFields};
use super::state::PerturbationState;
use crate::background::{AffineSample, BackgroundProfile};
use crate::calculus::{GridFunction, Parity, RadialGrid};
use std::sync::Arc;

#[derive(Clone, Copy, Debug)]
pub struct ManufacturedSolution {
    pub epsilon: f64,
    pub options: EquationOptions,
}

impl ManufacturedSolution {
    pub fn new(epsilon: f64) -> ManufacturedSolution {
        ManufacturedSolution { epsilon, options: EquationOptions::default() }
    }

    fn amp(&self, tau: f64) -> f64 {
        self.epsilon * (-tau).exp()
    }

    pub fn state(&self, grid: &Arc<RadialGrid>, tau: f64) -> PerturbationState {
        let c = self.amp(tau);
        let h = GridFunction::from_fn(grid, Parity::Odd, |r| c * r * (1.0 - r * r));
        PerturbationState::new(tau, h.clone(), -h)
    }

    /// Exact nodal fields of `H*`.
    pub fn fields(&self, profile: &BackgroundProfile, tau: f64) -> RhsFields {
        let grid = profile.grid();
        let c = self.amp(tau);
        let f = |p: Parity, g: &dyn Fn(f64) -> f64| GridFunction::from_fn(grid, p, g);
        RhsFields {
            h: f(Parity::Odd, &|r| c * r * (1.0 - r * r)),
            h_tau: f(Parity::Odd, &|r| -c * r * (1.0 - r * r)),
            theta: f(Parity::Even, &|r| c * (1.0 - r * r)),
            theta_r: f(Parity::Odd, &|r| -2.0 * c * r),
            dr_h: f(Parity::Even, &|r| c * (3.0 - 5.0 * r * r)),
            l0: profile.a_coef() * f(Parity::Odd, &|r| -10.0 * c * r)
                + profile.b_coef(0) * f(Parity::Even, &|r| c * (3.0 - 5.0 * r * r)),
        }
    }
}

impl Forcing for ManufacturedSolution {
    fn source(&self, tau: f64, background: &AffineSample, profile: &BackgroundProfile) -> GridFunction {
        let fields = self.fields(profile, tau);
        let exact_rhs = rhs_from_fields(&fields, background, profile, self.options);
        (&fields.h - exact_rhs).with_parity(Parity::Odd)
    }
}
