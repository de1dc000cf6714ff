//! Refinement studies for the discrete operator identities.

use serde::Serialize;

use crate::background::{BackgroundProfile, PhiSpec};
use crate::calculus::{
    apply_lk, apply_lk_star, compute_qminus, compute_qplus, product_rule_residual, GridFunction, Parity, RadialGrid,
};
use crate::error::Result;

/// Residual of one identity at a sequence of resolutions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityStudy {
    pub identity: String,
    pub profile: String,
    pub index: usize,
    pub n: Vec<usize>,
    pub residual: Vec<f64>,
    /// Least-squares slope of `-log2 residual` against `log2 n`.
    pub order: f64,
}

impl IdentityStudy {
    pub fn passes(&self, min_order: f64) -> bool {
        self.residual.iter().all(|r| r.is_finite()) && self.order >= min_order
    }
}

fn test_odd(grid: &std::sync::Arc<RadialGrid>) -> GridFunction {
    GridFunction::from_fn(grid, Parity::Odd, |r| (1.3 * r).sin() + 0.3 * r.powi(3))
}

fn test_even(grid: &std::sync::Arc<RadialGrid>) -> GridFunction {
    GridFunction::from_fn(grid, Parity::Even, |r| (2.0 * r).cos() + 0.5 * r * r)
}

fn coefficient(grid: &std::sync::Arc<RadialGrid>) -> GridFunction {
    GridFunction::from_fn(grid, Parity::Even, |r| 1.0 / (1.0 + r * r))
}

/// `‖D_r L_k f - L_{k+1}^* D_r f - Q_+ D_r f‖_∞ / ‖D_r L_k f‖_∞`.
pub fn qplus_residual(k: usize, profile: &BackgroundProfile) -> f64 {
    let f = test_odd(profile.grid());
    let g = f.dr();
    let left = apply_lk(k, &f, profile).dr();
    let res = &left - &(apply_lk_star(k + 1, &g, profile) + compute_qplus(k, profile) * &g);
    res.max_abs() / left.max_abs()
}

/// `‖∂_r L_k^* h - L_{k+1} ∂_r h - Q_- ∂_r h‖_∞ / ‖∂_r L_k^* h‖_∞`.
pub fn qminus_residual(k: usize, profile: &BackgroundProfile) -> f64 {
    let h = test_even(profile.grid());
    let g = h.partial();
    let left = apply_lk_star(k, &h, profile).partial();
    let res = &left - &(apply_lk(k + 1, &g, profile) + compute_qminus(k, profile) * &g);
    res.max_abs() / left.max_abs()
}

/// Relative product-rule residual for an odd `f` and an even `g`.
pub fn product_rule_relative(i: usize, grid: &std::sync::Arc<RadialGrid>) -> Result<f64> {
    let f = test_odd(grid);
    let g = coefficient(grid);
    let scale = (&f * &g).di(i)?.max_abs();
    Ok(product_rule_residual(i, &f, &g)?.max_abs() / scale)
}

/// `‖∂_r 𝒥 - ξ^2 (r ∂_r^2 θ + 4 ∂_r θ) - 2 ξ (∂_r θ)^2 r‖_∞` for
/// `θ = s (cos r + r^2 / 2)`.
pub fn regularization_residual(grid: &std::sync::Arc<RadialGrid>, s: f64) -> f64 {
    let theta = GridFunction::from_fn(grid, Parity::Even, |r| s * (r.cos() + 0.5 * r * r));
    let theta_r = theta.partial();
    let theta_rr = theta_r.partial();
    let xi = theta.map(|t| 1.0 + t);
    let q = &theta + &theta_r.times_r();
    let jac = xi.zip_with(&q, Parity::Even, |x, q| x * x * (1.0 + q));
    let r = GridFunction::radius(grid);
    let expect = &xi * &xi * (&r * &theta_rr + &theta_r * 4.0) + &xi * &theta_r * &theta_r * &r * 2.0;
    (jac.partial() - expect).max_abs()
}

/// Slope of `-log2 e` against `log2 n`.
pub fn observed_order(n: &[usize], e: &[f64]) -> f64 {
    let xs: Vec<f64> = n.iter().map(|&v| (v as f64).log2()).collect();
    let ys: Vec<f64> = e.iter().map(|&v| -v.log2()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Every identity for `k, i <= order_max` over the profile corpus.
pub fn operator_studies(gamma: f64, stencil: usize, order_max: usize, resolutions: &[usize]) -> Result<Vec<IdentityStudy>> {
    let corpus = PhiSpec::corpus();
    let mut out = Vec::new();
    let mut push = |identity: &str, profile: &str, index: usize, residual: Vec<f64>| {
        out.push(IdentityStudy {
            identity: identity.into(),
            profile: profile.into(),
            index,
            n: resolutions.to_vec(),
            order: observed_order(resolutions, &residual),
            residual,
        });
    };
    let grids = resolutions.iter().map(|&n| RadialGrid::new(n, stencil)).collect::<Result<Vec<_>>>()?;
    for (name, spec) in &corpus {
        let profiles = grids
            .iter()
            .map(|g| BackgroundProfile::build(spec, gamma, g, order_max + 2))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..=order_max {
            push("qplus", name, k, profiles.iter().map(|p| qplus_residual(k, p)).collect());
            push("qminus", name, k, profiles.iter().map(|p| qminus_residual(k, p)).collect());
        }
    }
    for i in 1..=order_max.max(1) {
        let res = grids.iter().map(|g| product_rule_relative(i, g)).collect::<Result<Vec<_>>>()?;
        push("product_rule", "none", i, res);
    }
    push("regularization", "none", 0, grids.iter().map(|g| regularization_residual(g, 0.1)).collect());
    Ok(out)
}
