//! Density profile `ρ̄ = φ` and entropy weight `d`.
//!
//! For a given density the weight
//!
//! ```text
//! d(r) = φ(r)^{-γ} ∫_r^1 ℓ φ(ℓ) dℓ
//! ```
//!
//! solves the balance relation `ρ̄ r + ∂_r(ρ̄^γ d) = 0` and vanishes at the
//! vacuum boundary `r = 1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::chebyshev::ChebSeries;
use super::jet::Jet;
use crate::calculus::{GridFunction, Parity, RadialGrid};
use crate::error::{Error, Result};

/// Density profile descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PhiSpec {
    /// `φ(r) = Σ c_i r^i`.
    Poly { coeffs: Vec<f64> },
    /// Tabulated samples on `[0, 1]`, fitted by a Chebyshev series.
    Table { r: Vec<f64>, phi: Vec<f64> },
}

impl PhiSpec {
    pub fn constant() -> PhiSpec {
        PhiSpec::Poly { coeffs: vec![1.0] }
    }

    /// `1 + r^2 (1 - r)`.
    pub fn cubic_bump() -> PhiSpec {
        PhiSpec::Poly { coeffs: vec![1.0, 0.0, 1.0, -1.0] }
    }

    /// `exp(-r^2)` tabulated at `m + 1` Chebyshev points of `[0, 1]`.
    pub fn gaussian_table(m: usize) -> PhiSpec {
        let r: Vec<f64> = (0..=m)
            .map(|k| 0.5 - 0.5 * (std::f64::consts::PI * k as f64 / m as f64).cos())
            .collect();
        let phi = r.iter().map(|x| (-x * x).exp()).collect();
        PhiSpec::Table { r, phi }
    }

    /// The test corpus: constant, cubic bump and Gaussian.
    pub fn corpus() -> Vec<(&'static str, PhiSpec)> {
        vec![
            ("constant", PhiSpec::constant()),
            ("cubic", PhiSpec::cubic_bump()),
            ("gaussian", PhiSpec::gaussian_table(40)),
        ]
    }
}

/// Continuous evaluator for `φ` and its derivatives.
#[derive(Clone, Debug)]
enum Shape {
    Poly(Vec<f64>),
    Cheb(Vec<ChebSeries>),
}

const MAX_JET: usize = 8;

impl Shape {
    fn from_spec(spec: &PhiSpec) -> Result<Shape> {
        match spec {
            PhiSpec::Poly { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidProfile("polynomial needs finite coefficients".into()));
                }
                Ok(Shape::Poly(coeffs.clone()))
            }
            PhiSpec::Table { r, phi } => {
                if r.len() != phi.len() || r.len() < 4 {
                    return Err(Error::InvalidProfile(
                        "table needs matching r and phi arrays with at least 4 entries".into(),
                    ));
                }
                if r.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidProfile("table radii must increase strictly".into()));
                }
                if r[0].abs() > 1e-12 || (r[r.len() - 1] - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidProfile("table must span [0, 1]".into()));
                }
                if phi.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidProfile("table values must be finite".into()));
                }
                let mut series = vec![ChebSeries::fit(r, phi, 48)?];
                for _ in 0..MAX_JET {
                    let next = series.last().unwrap().derivative();
                    series.push(next);
                }
                Ok(Shape::Cheb(series))
            }
        }
    }

    fn eval(&self, r: f64) -> f64 {
        self.jet(r, 0).0[0]
    }

    /// Taylor coefficients of `φ` at `r` up to degree `k`.
    fn jet(&self, r: f64, k: usize) -> Jet {
        match self {
            Shape::Poly(c) => Jet((0..=k)
                .map(|m| {
                    c.iter()
                        .enumerate()
                        .skip(m)
                        .map(|(i, ci)| ci * binomial(i, m) * r.powi((i - m) as i32))
                        .sum()
                })
                .collect()),
            Shape::Cheb(s) => {
                let mut fact = 1.0;
                Jet((0..=k)
                    .map(|m| {
                        if m > 0 {
                            fact *= m as f64;
                        }
                        s[m].eval(r) / fact
                    })
                    .collect())
            }
        }
    }

    /// `∫_r^1 ℓ φ(ℓ) dℓ` by 24-point Gauss-Legendre.
    fn tail_moment(&self, r: f64) -> f64 {
        let (x, w) = gauss_legendre(24);
        let half = 0.5 * (1.0 - r);
        let mid = 0.5 * (1.0 + r);
        x.iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let l = mid + half * xi;
                wi * l * self.eval(l)
            })
            .sum::<f64>()
            * half
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=m {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = m as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

/// Density profile and entropy weight sampled on a grid, with derivatives.
#[derive(Clone, Debug)]
pub struct BackgroundProfile {
    pub phi_spec: PhiSpec,
    gamma: f64,
    grid: Arc<RadialGrid>,
    shape: Shape,
    parity: Parity,
    rho_derivs: Vec<GridFunction>,
    d_derivs: Vec<GridFunction>,
    d_boundary: f64,
}

impl BackgroundProfile {
    /// Build `ρ̄`, `d` and their first `k_derivs` derivatives on `grid`
    /// (at least two derivatives are always provided).
    pub fn build(phi_spec: &PhiSpec, gamma: f64, grid: &Arc<RadialGrid>, k_derivs: usize) -> Result<BackgroundProfile> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
        }
        let k = k_derivs.max(2);
        if k > MAX_JET {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_JET} profile derivatives are supported, got {k}"
            )));
        }
        let shape = Shape::from_spec(phi_spec)?;

        let scale = (0..=400)
            .map(|i| shape.eval(i as f64 / 400.0).abs())
            .fold(0.0, f64::max);
        let probes = (0..=400).map(|i| i as f64 / 400.0).chain(grid.nodes().iter().copied());
        for r in probes {
            let v = shape.eval(r);
            if !(v > 0.0) {
                return Err(Error::InvalidProfile(format!("phi = {v} is not positive at r = {r}")));
            }
        }
        let slope0 = shape.jet(0.0, 1).0[1];
        if slope0.abs() > 1e-6 * scale.max(1.0) {
            return Err(Error::InvalidProfile(format!("phi'(0) = {slope0:e} must vanish")));
        }

        // Composite Simpson with panels of width h/2, accumulated inward from
        // r = 1 so that the vacuum value is exact. Nodes sit at even points
        // of the quarter-cell lattice t_m = 1 - m h / 4.
        let n = grid.n();
        let q = grid.h() / 4.0;
        let integrand = |t: f64| t * shape.eval(t);
        let mut tail = vec![0.0; n];
        let mut acc = 0.0;
        let mut m = 0usize;
        for j in (0..n).rev() {
            let target = 4 * (n - j) - 2;
            while m < target {
                let (t0, t1, t2) = (1.0 - m as f64 * q, 1.0 - (m + 1) as f64 * q, 1.0 - (m + 2) as f64 * q);
                acc += (2.0 * q) / 6.0 * (integrand(t0) + 4.0 * integrand(t1) + integrand(t2));
                m += 2;
            }
            tail[j] = acc;
        }

        let mut rho_derivs = vec![Vec::with_capacity(n); k + 1];
        let mut d_derivs = vec![Vec::with_capacity(n); k + 1];
        for (j, &r) in grid.nodes().iter().enumerate() {
            let phi = shape.jet(r, k);
            let d = weight_jet(&phi, r, tail[j], gamma, k).derivatives();
            for (l, v) in phi.derivatives().into_iter().enumerate() {
                rho_derivs[l].push(v);
            }
            for (l, v) in d.into_iter().enumerate() {
                d_derivs[l].push(v);
            }
        }
        // Only polynomials in r^2 are known to extend evenly through the
        // origin; everything else gets extrapolated ghost values.
        let parity = match phi_spec {
            PhiSpec::Poly { coeffs } if coeffs.iter().skip(1).step_by(2).all(|c| *c == 0.0) => Parity::Even,
            _ => Parity::None,
        };
        let wrap = |vals: Vec<Vec<f64>>| -> Vec<GridFunction> {
            vals.into_iter()
                .enumerate()
                .map(|(l, v)| {
                    let p = if l % 2 == 0 { parity } else { parity.flip() };
                    GridFunction::new(grid, v, p)
                })
                .collect()
        };

        Ok(BackgroundProfile {
            phi_spec: phi_spec.clone(),
            gamma,
            grid: Arc::clone(grid),
            shape,
            parity,
            rho_derivs: wrap(rho_derivs),
            d_derivs: wrap(d_derivs),
            d_boundary: 0.0,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn rho_bar(&self) -> &GridFunction {
        &self.rho_derivs[0]
    }

    pub fn d_weight(&self) -> &GridFunction {
        &self.d_derivs[0]
    }

    /// `∂_r^l ρ̄`.
    pub fn rho(&self, l: usize) -> &GridFunction {
        &self.rho_derivs[l]
    }

    /// `∂_r^l d`.
    pub fn d(&self, l: usize) -> &GridFunction {
        &self.d_derivs[l]
    }

    /// Reflection symmetry of `ρ̄` and `d`: even for polynomials in `r^2`.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn k_derivs(&self) -> usize {
        self.d_derivs.len() - 1
    }

    /// Value of `d` at the vacuum boundary in the discrete representation.
    pub fn d_at_boundary(&self) -> f64 {
        self.d_boundary
    }

    /// `φ(r)` from the continuous representation.
    pub fn phi(&self, r: f64) -> f64 {
        self.shape.eval(r)
    }

    /// `d(r)` from the continuous representation (Gauss-Legendre moment).
    pub fn d_continuous(&self, r: f64) -> f64 {
        self.shape.tail_moment(r) / self.shape.eval(r).powf(self.gamma)
    }

    /// `ρ̄ r + ∂_r(ρ̄^γ d)` with the grid's difference operator.
    pub fn balance_residual(&self) -> GridFunction {
        let g = self.gamma;
        let flux = self.rho_bar().zip_with(self.d_weight(), self.parity, |rho, d| rho.powf(g) * d);
        self.rho_bar().times_r() + flux.partial()
    }

    /// One-sided slope of `ρ̄^{γ-1} d` at `r = 1`, by Richardson extrapolation
    /// of backward differences.
    pub fn boundary_slope(&self) -> f64 {
        let g = self.gamma;
        let f = |r: f64| self.shape.eval(r).powf(g - 1.0) * self.d_continuous(r);
        let levels = 6;
        let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
        for k in 0..levels {
            let delta = 0.05 / 2f64.powi(k as i32);
            let mut row = vec![(0.0 - f(1.0 - delta)) / delta];
            for l in 1..=k {
                let factor = 2f64.powi(l as i32);
                let v = (factor * row[l - 1] - table[k - 1][l - 1]) / (factor - 1.0);
                row.push(v);
            }
            table.push(row);
        }
        table[levels - 1][levels - 1]
    }

    /// `A = ρ̄^{γ-1} d`.
    pub fn a_coef(&self) -> GridFunction {
        let g = self.gamma;
        self.rho_bar().zip_with(self.d_weight(), self.parity, |rho, d| rho.powf(g - 1.0) * d)
    }

    /// `B_k = c_k ρ̄^{γ-2} ρ̄' d + (1 + k) ρ̄^{γ-1} d'`, `c_k = γ + k(γ - 1)`.
    pub fn b_coef(&self, k: usize) -> GridFunction {
        let g = self.gamma;
        let ck = g + k as f64 * (g - 1.0);
        let kk = 1.0 + k as f64;
        let vals = (0..self.grid.n())
            .map(|j| {
                let (rho, rho1) = (self.rho(0).values()[j], self.rho(1).values()[j]);
                let (d, d1) = (self.d(0).values()[j], self.d(1).values()[j]);
                ck * rho.powf(g - 2.0) * rho1 * d + kk * rho.powf(g - 1.0) * d1
            })
            .collect();
        GridFunction::new(&self.grid, vals, self.parity.flip())
    }

    /// `∂_r B_k`.
    pub fn b_coef_prime(&self, k: usize) -> GridFunction {
        let g = self.gamma;
        let ck = g + k as f64 * (g - 1.0);
        let kk = 1.0 + k as f64;
        let vals = (0..self.grid.n())
            .map(|j| {
                let (rho, rho1, rho2) = (self.rho(0).values()[j], self.rho(1).values()[j], self.rho(2).values()[j]);
                let (d, d1, d2) = (self.d(0).values()[j], self.d(1).values()[j], self.d(2).values()[j]);
                ck * ((g - 2.0) * rho.powf(g - 3.0) * rho1 * rho1 * d
                    + rho.powf(g - 2.0) * rho2 * d
                    + rho.powf(g - 2.0) * rho1 * d1)
                    + kk * ((g - 1.0) * rho.powf(g - 2.0) * rho1 * d1 + rho.powf(g - 1.0) * d2)
            })
            .collect();
        GridFunction::new(&self.grid, vals, self.parity)
    }
}

/// Taylor jet of `d = P φ^{-γ}` where `P' = -r φ` and `P(r) = tail`.
fn weight_jet(phi: &Jet, r: f64, tail: f64, gamma: f64, k: usize) -> Jet {
    // Taylor coefficients of u(ℓ) = ℓ φ(ℓ) around r.
    let u: Vec<f64> = (0..k)
        .map(|m| r * phi.0[m] + if m > 0 { phi.0[m - 1] } else { 0.0 })
        .collect();
    let mut p = vec![tail];
    p.extend((1..=k).map(|m| -u[m - 1] / m as f64));
    Jet(p).mul(&phi.powf(-gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, p: usize) -> Arc<RadialGrid> {
        RadialGrid::new(n, p).unwrap()
    }

    #[test]
    fn constant_profile_weight_is_exact() {
        for gamma in [1.4, 5.0 / 3.0, 2.0] {
            let prof = BackgroundProfile::build(&PhiSpec::constant(), gamma, &grid(128, 4), 3).unwrap();
            let exact = GridFunction::from_fn(prof.grid(), Parity::Even, |r| 0.5 * (1.0 - r * r));
            assert!((prof.d_weight() - &exact).max_abs() < 1e-13);
            let d1 = GridFunction::from_fn(prof.grid(), Parity::Odd, |r| -r);
            assert!((prof.d(1) - &d1).max_abs() < 1e-13);
            assert!((prof.d(2).values()[5] + 1.0).abs() < 1e-13);
            assert_eq!(prof.d_at_boundary(), 0.0);
            assert!(prof.balance_residual().max_abs() < 1e-12);
            assert!((prof.boundary_slope() + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn weight_matches_continuous_reference() {
        for (_, spec) in PhiSpec::corpus() {
            let prof = BackgroundProfile::build(&spec, 1.4, &grid(64, 4), 2).unwrap();
            for (j, &r) in prof.grid().nodes().iter().enumerate() {
                let v = prof.d_weight().values()[j];
                assert!(v > 0.0);
                assert!((v - prof.d_continuous(r)).abs() < 1e-8, "r = {r}");
            }
        }
    }

    #[test]
    fn derivative_jets_match_difference_quotients() {
        let prof = BackgroundProfile::build(&PhiSpec::cubic_bump(), 1.7, &grid(32, 4), 3).unwrap();
        let r = prof.grid().nodes()[10];
        let eps = 1e-5;
        let fd = (prof.d_continuous(r + eps) - prof.d_continuous(r - eps)) / (2.0 * eps);
        assert!((fd - prof.d(1).values()[10]).abs() < 1e-8);
        let fd2 = (prof.d_continuous(r + eps) - 2.0 * prof.d_continuous(r) + prof.d_continuous(r - eps)) / (eps * eps);
        assert!((fd2 - prof.d(2).values()[10]).abs() < 1e-4);
    }

    #[test]
    fn balance_residual_converges_at_second_order() {
        for (_, spec) in PhiSpec::corpus().into_iter().skip(1) {
            let res: Vec<f64> = [32, 64, 128]
                .iter()
                .map(|&n| BackgroundProfile::build(&spec, 1.4, &grid(n, 2), 2).unwrap().balance_residual().max_abs())
                .collect();
            let order = (res[1] / res[2]).log2();
            assert!(order > 1.7, "order {order}");
        }
    }

    #[test]
    fn boundary_slope_is_minus_one() {
        for (_, spec) in PhiSpec::corpus() {
            for gamma in [1.4, 2.0] {
                let prof = BackgroundProfile::build(&spec, gamma, &grid(32, 2), 2).unwrap();
                assert!((prof.boundary_slope() + 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_invalid_profiles() {
        let g = grid(32, 2);
        let neg = PhiSpec::Poly { coeffs: vec![1.0, 0.0, -2.0] };
        assert!(matches!(BackgroundProfile::build(&neg, 1.4, &g, 2), Err(Error::InvalidProfile(_))));
        let tilted = PhiSpec::Poly { coeffs: vec![1.0, 0.3] };
        assert!(matches!(BackgroundProfile::build(&tilted, 1.4, &g, 2), Err(Error::InvalidProfile(_))));
        assert!(matches!(
            BackgroundProfile::build(&PhiSpec::constant(), 1.0, &g, 2),
            Err(Error::InvalidParameter(_))
        ));
        let short = PhiSpec::Table { r: vec![0.0, 1.0], phi: vec![1.0, 1.0] };
        assert!(BackgroundProfile::build(&short, 1.4, &g, 2).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(24);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(46)).sum();
        assert!((s - 2.0 / 47.0).abs() < 1e-14);
    }
}
