//! Nonlinear remainders of the `H` equation.
//!
//! With `θ = H/r`, `ξ = 1 + θ` and `𝒥 = ξ^2(ξ + r ξ_r)`:
//!
//! ```text
//! R1  = -2γ ρ̄^{γ-1} d ξ^3 𝒥^{-γ-1} (∂_r θ)^2
//! R2a = -ξ^2 [ (𝒥^{-γ} - 1) + γ(𝒥 - 1) + γ(𝒥^{-γ-1} - 1) ξ^2 (r θ_r + 3θ) ]
//! R2b = -γ ξ^2 (3θ^2 + 2θ^3)
//! R2  = R2a + R2b
//! ```
//!
//! `R3` collects the lower-order part of `∂_r(r R2a)`:
//! `∂_r(r R2a) = r γ(γ+1) ξ^4 𝒥^{-γ-2} 𝒥_r D_r H + R3`. The difference
//! `∂_r 𝒥 - ξ^2 (r θ_rr + 4 θ_r)` inside it is replaced by the exact
//! first-order expression `2 ξ θ_r^2 r`.

use super::state::{Geometry, PerturbationState};
use crate::calculus::{GridFunction, Parity};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Remainders {
    pub r1: GridFunction,
    pub r2: GridFunction,
    pub r2a: GridFunction,
    pub r2b: GridFunction,
    pub r3: GridFunction,
}

/// Evaluate all remainders for `state`.
pub fn compute_remainders(state: &PerturbationState, profile: &crate::background::BackgroundProfile) -> Result<Remainders> {
    let geo = state.geometry(profile.gamma());
    check_jacobian(&geo, state)?;
    Ok(remainders_from_geometry(&geo, &profile.a_coef(), profile.gamma()))
}

pub(crate) fn check_jacobian(geo: &Geometry, state: &PerturbationState) -> Result<()> {
    let nodes = state.grid().nodes();
    if let Some((j, v)) = geo.jac.values().iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::DegenerateFlowMap { r: nodes[j], value: *v });
    }
    Ok(())
}

/// Remainders from an already assembled geometry and `A = ρ̄^{γ-1} d`.
pub fn remainders_from_geometry(geo: &Geometry, a_coef: &GridFunction, gamma: f64) -> Remainders {
    let grid = geo.theta.grid();
    let n = grid.n();
    let mut r1 = vec![0.0; n];
    let mut r2a = vec![0.0; n];
    let mut r2b = vec![0.0; n];
    let mut r3 = vec![0.0; n];
    for j in 0..n {
        let r = grid.nodes()[j];
        let t = geo.theta.values()[j];
        let tr = geo.theta_r.values()[j];
        let x = geo.xi.values()[j];
        let jm1 = geo.jm1.values()[j];
        let a = a_coef.values()[j];
        let lj = jm1.ln_1p();
        let jg = (-gamma * lj).exp_m1();
        let jg1 = (-(gamma + 1.0) * lj).exp_m1();
        let dr_h = geo.q.values()[j] + 2.0 * t;
        let x2 = x * x;

        r1[j] = -2.0 * gamma * a * x * x2 * (1.0 + jg1) * tr * tr;
        r2a[j] = -x2 * (jg + gamma * jm1 + gamma * jg1 * x2 * dr_h);
        r2b[j] = -gamma * x2 * (3.0 * t * t + 2.0 * t * t * t);
        r3[j] = r * x2 * gamma * jg1 * (2.0 * x * tr * tr * r) - 2.0 * r * gamma * x2 * jg1 * x * tr * dr_h
            + (x2 + 2.0 * r * x * tr) * r2a[j] / x2;
    }
    let wrap = |v| GridFunction::new(grid, v, Parity::Even);
    let r2a = wrap(r2a);
    let r2b = wrap(r2b);
    Remainders { r1: wrap(r1), r2: &r2a + &r2b, r2a, r2b, r3: wrap(r3) }
}
