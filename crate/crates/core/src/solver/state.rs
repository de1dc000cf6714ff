//! The perturbation `(H, H_τ)` and the geometric factors derived from it.

use std::sync::Arc;

use crate::calculus::{GridFunction, Parity, RadialGrid};

/// `(H, H_τ)` at one rescaled time. Both fields are odd in `r`.
#[derive(Clone, Debug)]
pub struct PerturbationState {
    pub tau: f64,
    pub h: GridFunction,
    pub h_tau: GridFunction,
}

/// Quantities computed from `H` alone. They are rebuilt on demand and never
/// cached inside the state.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub theta: GridFunction,
    pub theta_r: GridFunction,
    /// `ξ = 1 + θ`.
    pub xi: GridFunction,
    /// `r ∂_r θ`.
    pub r_theta_r: GridFunction,
    /// `q = θ + r θ_r`, so that `ξ + r ξ_r = 1 + q`.
    pub q: GridFunction,
    /// `𝒥 - 1`, evaluated without cancellation.
    pub jm1: GridFunction,
    /// `𝒥 = ξ^2 (ξ + ξ_r r)`.
    pub jac: GridFunction,
    /// `e = ξ^4 𝒥^{-γ-1}`.
    pub e: GridFunction,
}

impl Geometry {
    /// Assemble from `θ` and `∂_r θ`.
    pub fn from_theta(gamma: f64, theta: GridFunction, theta_r: GridFunction) -> Geometry {
        let r_theta_r = theta_r.times_r();
        let xi = theta.map(|t| 1.0 + t);
        let q = &theta + &r_theta_r;
        let jm1 = jacobian_minus_one(&theta, &q);
        let jac = jm1.map(|v| 1.0 + v);
        let e = xi.zip_with(&jm1, Parity::Even, |x, j| x.powi(4) * (-(gamma + 1.0) * j.ln_1p()).exp());
        Geometry { theta, theta_r, xi, r_theta_r, q, jm1, jac, e }
    }

    /// Geometry of the affine background: `θ = 0`, `𝒥 = 1`.
    pub fn affine(grid: &Arc<RadialGrid>) -> Geometry {
        Geometry::from_theta(2.0, GridFunction::zeros(grid, Parity::Even), GridFunction::zeros(grid, Parity::Odd))
    }
}

fn jacobian_minus_one(theta: &GridFunction, q: &GridFunction) -> GridFunction {
    theta.zip_with(q, Parity::Even, |t, q| {
        let s = 2.0 * t + t * t;
        q + s + s * q
    })
}

impl PerturbationState {
    pub fn new(tau: f64, h: GridFunction, h_tau: GridFunction) -> PerturbationState {
        PerturbationState { tau, h: h.with_parity(Parity::Odd), h_tau: h_tau.with_parity(Parity::Odd) }
    }

    /// The affine motion itself.
    pub fn zero(grid: &Arc<RadialGrid>, tau: f64) -> PerturbationState {
        PerturbationState::new(tau, GridFunction::zeros(grid, Parity::Odd), GridFunction::zeros(grid, Parity::Odd))
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.h.grid()
    }

    /// `θ = H / r`.
    pub fn theta(&self) -> GridFunction {
        self.h.over_r()
    }

    pub fn xi(&self) -> GridFunction {
        self.theta().map(|t| 1.0 + t)
    }

    pub fn geometry(&self, gamma: f64) -> Geometry {
        let theta = self.theta();
        let theta_r = theta.partial();
        Geometry::from_theta(gamma, theta, theta_r)
    }

    pub fn jacobian(&self) -> GridFunction {
        let theta = self.theta();
        let q = &theta + theta.partial().times_r();
        jacobian_minus_one(&theta, &q).map(|v| 1.0 + v)
    }

    /// `∂_r 𝒥` by differencing `𝒥`.
    pub fn jacobian_r(&self) -> GridFunction {
        self.jacobian().partial()
    }

    /// `∂_r^2 θ`.
    pub fn theta_rr(&self) -> GridFunction {
        self.theta().partial().partial()
    }

    /// `max(‖H‖_∞, ‖H_τ‖_∞)`.
    pub fn max_abs(&self) -> f64 {
        self.h.max_abs().max(self.h_tau.max_abs())
    }

    /// CSV rows `tau,r,H,H_tau` (without header).
    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for ((r, h), ht) in self.grid().nodes().iter().zip(self.h.values()).zip(self.h_tau.values()) {
            s.push_str(&format!("{:.16e},{r:.16e},{h:.16e},{ht:.16e}\n", self.tau));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_theta_jacobian() {
        let grid = RadialGrid::new(32, 4).unwrap();
        let c = 0.2;
        let st = PerturbationState::new(0.0, GridFunction::from_fn(&grid, Parity::Odd, |r| c * r), GridFunction::zeros(&grid, Parity::Odd));
        let geo = st.geometry(1.4);
        assert!((geo.jac.values()[7] - (1.0 + c).powi(3)).abs() < 1e-12);
        assert!(geo.theta_r.max_abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_product_form() {
        let grid = RadialGrid::new(128, 4).unwrap();
        let h = GridFunction::from_fn(&grid, Parity::Odd, |r| 0.1 * r * (1.0 + r * r).cos());
        let st = PerturbationState::new(0.0, h, GridFunction::zeros(&grid, Parity::Odd));
        let geo = st.geometry(1.4);
        for (j, &r) in grid.nodes().iter().enumerate() {
            let th = 0.1 * (1.0 + r * r).cos();
            let th_r = -0.2 * r * (1.0 + r * r).sin();
            let exact = (1.0 + th).powi(2) * (1.0 + th + r * th_r);
            assert!((geo.jac.values()[j] - exact).abs() < 1e-7);
        }
    }
}
