//! Cell-centred radial grid on `[0, 1]` and sampled fields.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::stencil::{fornberg, integration_weights};
use crate::error::{Error, Result};

/// Reflection symmetry of a field under `r -> -r`.
///
/// Radial vector quantities such as `H` extend oddly through the origin and
/// scalars such as `theta` extend evenly; this fixes the ghost values left of
/// `r = 0`. Fields without a known symmetry are extrapolated instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        }
    }

    pub fn product(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::None, _) | (_, Parity::None) => Parity::None,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn sum(self, other: Parity) -> Parity {
        if self == other {
            self
        } else {
            Parity::None
        }
    }
}

/// Uniform cell-centred grid `r_j = (j + 1/2)/n`, `j = 0..n`.
#[derive(Debug)]
pub struct RadialGrid {
    n: usize,
    h: f64,
    order: usize,
    nodes: Vec<f64>,
    deriv: Vec<f64>,
    right_ghosts: Vec<Vec<f64>>,
    left_ghosts: Vec<Vec<f64>>,
    quad_r2: Vec<f64>,
    quad_plain: Vec<f64>,
    first_segment: Vec<f64>,
    segment: Vec<f64>,
}

impl RadialGrid {
    /// Build a grid with `n >= 16` cells and centred stencils of order 2 or 4.
    pub fn new(n: usize, order: usize) -> Result<Arc<RadialGrid>> {
        if n < 16 {
            return Err(Error::InvalidParameter(format!("grid needs n >= 16, got {n}")));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidParameter(format!(
                "stencil order must be 2 or 4, got {order}"
            )));
        }
        let h = 1.0 / n as f64;
        let nodes: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
        let m = order / 2;

        let offsets: Vec<f64> = (-(m as i64)..=m as i64).map(|s| s as f64).collect();
        let deriv: Vec<f64> = fornberg(0.0, &offsets, 1)[1].iter().map(|w| w / h).collect();

        // Ghost values come from a polynomial two degrees above the stencil
        // order, so that boundary errors stay below the interior truncation
        // error after several compositions.
        let q = order + 2;
        let ghost_count = m.max(2);
        let right_ghosts = (1..=ghost_count)
            .map(|k| {
                let x: Vec<f64> = (0..=q).map(|i| -(i as f64)).collect();
                fornberg(k as f64, &x, 0).swap_remove(0)
            })
            .collect();
        let left_ghosts = (1..=ghost_count)
            .map(|k| {
                let x: Vec<f64> = (0..=q).map(|i| i as f64).collect();
                fornberg(-(k as f64), &x, 0).swap_remove(0)
            })
            .collect();

        let mut quad_r2: Vec<f64> = nodes.iter().map(|r| h * r * r).collect();
        let mut quad_plain = vec![h; n];
        if order == 4 {
            // Euler-Maclaurin end correction of the midpoint rule. The
            // derivative of g = f r^2 vanishes at the origin, so only the outer
            // end contributes for the r^2 rule.
            let right: Vec<f64> = (0..4).map(|k| nodes[n - 1 - k]).collect();
            let wr = &fornberg(1.0, &right, 1)[1];
            let left: Vec<f64> = nodes[..4].to_vec();
            let wl = &fornberg(0.0, &left, 1)[1];
            for k in 0..4 {
                let j = n - 1 - k;
                quad_r2[j] += h * h / 24.0 * wr[k] * nodes[j] * nodes[j];
                quad_plain[j] += h * h / 24.0 * wr[k];
                quad_plain[k] -= h * h / 24.0 * wl[k];
            }
        }

        let first_segment = integration_weights(&[-1.5, -0.5, 0.5, 1.5], 0.0, 0.5)
            .iter()
            .map(|w| w * h)
            .collect();
        let segment = integration_weights(&[-1.0, 0.0, 1.0, 2.0], 0.0, 1.0)
            .iter()
            .map(|w| w * h)
            .collect();

        Ok(Arc::new(RadialGrid {
            n,
            h,
            order,
            nodes,
            deriv,
            right_ghosts,
            left_ghosts,
            quad_r2,
            quad_plain,
            first_segment,
            segment,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn stencil_order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `∫_0^1 f r^2 dr`.
    pub fn quad_r2_weights(&self) -> &[f64] {
        &self.quad_r2
    }

    /// Weights for `∫_0^1 f dr`.
    pub fn quad_plain_weights(&self) -> &[f64] {
        &self.quad_plain
    }

    /// Largest operator order accepted by `D_i`-type compositions.
    pub fn max_operator_order(&self) -> usize {
        self.n / 8
    }

    /// Values extended by `m <= 2` ghost cells on both sides.
    fn extend(&self, values: &[f64], parity: Parity, m: usize) -> Vec<f64> {
        let n = self.n;
        let q = self.order + 2;
        let mut ext = vec![0.0; n + 2 * m];
        ext[m..m + n].copy_from_slice(values);
        for k in 1..=m {
            ext[m - k] = match parity {
                Parity::Even => values[k - 1],
                Parity::Odd => -values[k - 1],
                Parity::None => {
                    let w = &self.left_ghosts[k - 1];
                    (0..=q).map(|i| w[i] * values[i]).sum()
                }
            };
            let w = &self.right_ghosts[k - 1];
            ext[m + n - 1 + k] = (0..=q).map(|i| w[i] * values[n - 1 - i]).sum();
        }
        ext
    }

    fn derivative(&self, values: &[f64], parity: Parity) -> Vec<f64> {
        let ext = self.extend(values, parity, self.order / 2);
        (0..self.n)
            .map(|j| {
                self.deriv
                    .iter()
                    .enumerate()
                    .map(|(s, w)| w * ext[j + s])
                    .sum()
            })
            .collect()
    }

    /// `∫_0^{r_j} f s^2 ds` at every node, by piecewise cubic quadrature.
    pub fn cumulative_r2_integral(&self, f: &GridFunction) -> Vec<f64> {
        let n = self.n;
        let g: Vec<f64> = f
            .values
            .iter()
            .zip(&self.nodes)
            .map(|(v, r)| v * r * r)
            .collect();
        let m = 2;
        let ext = self.extend(&g, f.parity, m);
        let at = |j: i64| ext[(m as i64 + j) as usize];
        let mut out = Vec::with_capacity(n);
        let mut acc: f64 = (0..4).map(|k| self.first_segment[k] * at(k as i64 - 2)).sum();
        out.push(acc);
        for j in 1..n {
            let base = j as i64 - 2;
            acc += (0..4).map(|k| self.segment[k] * at(base + k as i64)).sum::<f64>();
            out.push(acc);
        }
        out
    }
}

/// A field sampled at the grid nodes.
#[derive(Clone, Debug)]
pub struct GridFunction {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    parity: Parity,
}

impl PartialEq for GridFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.parity == other.parity
    }
}

impl GridFunction {
    pub fn new(grid: &Arc<RadialGrid>, values: Vec<f64>, parity: Parity) -> GridFunction {
        assert_eq!(values.len(), grid.n, "value count must match the grid");
        GridFunction { grid: Arc::clone(grid), values, parity }
    }

    pub fn from_fn(grid: &Arc<RadialGrid>, parity: Parity, f: impl Fn(f64) -> f64) -> GridFunction {
        let values = grid.nodes.iter().map(|&r| f(r)).collect();
        GridFunction::new(grid, values, parity)
    }

    pub fn zeros(grid: &Arc<RadialGrid>, parity: Parity) -> GridFunction {
        GridFunction::new(grid, vec![0.0; grid.n], parity)
    }

    pub fn constant(grid: &Arc<RadialGrid>, c: f64) -> GridFunction {
        GridFunction::new(grid, vec![c; grid.n], Parity::Even)
    }

    /// The coordinate `r` itself.
    pub fn radius(grid: &Arc<RadialGrid>) -> GridFunction {
        GridFunction::new(grid, grid.nodes.clone(), Parity::Odd)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn with_parity(mut self, parity: Parity) -> GridFunction {
        self.parity = parity;
        self
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        let parity = match self.parity {
            Parity::Even => Parity::Even,
            _ => Parity::None,
        };
        let values = self.values.iter().map(|&v| f(v)).collect();
        GridFunction::new(&self.grid, values, parity)
    }

    /// Pointwise map that also receives the node radius; the result carries
    /// the given parity.
    pub fn map_with_r(&self, parity: Parity, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        let values = self
            .values
            .iter()
            .zip(&self.grid.nodes)
            .map(|(&v, &r)| f(r, v))
            .collect();
        GridFunction::new(&self.grid, values, parity)
    }

    pub fn zip_with(&self, other: &GridFunction, parity: Parity, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        GridFunction::new(&self.grid, values, parity)
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        GridFunction::new(&self.grid, self.values.iter().map(|v| c * v).collect(), self.parity)
    }

    pub fn powf(&self, p: f64) -> GridFunction {
        self.map(|v| v.powf(p))
    }

    /// `∂_r f`.
    pub fn partial(&self) -> GridFunction {
        let values = self.grid.derivative(&self.values, self.parity);
        GridFunction::new(&self.grid, values, self.parity.flip())
    }

    /// `f / r`.
    pub fn over_r(&self) -> GridFunction {
        self.map_with_r(self.parity.flip(), |r, v| v / r)
    }

    /// `r f`.
    pub fn times_r(&self) -> GridFunction {
        self.map_with_r(self.parity.flip(), |r, v| v * r)
    }

    /// `D_r f = r^{-2} ∂_r (r^2 f)`, evaluated as `∂_r f + 2 f / r`.
    pub fn dr(&self) -> GridFunction {
        let d = self.grid.derivative(&self.values, self.parity);
        let values = d
            .iter()
            .zip(&self.values)
            .zip(&self.grid.nodes)
            .map(|((dv, v), r)| dv + 2.0 * v / r)
            .collect();
        GridFunction::new(&self.grid, values, self.parity.flip())
    }

    /// `𝒟_i f`: `D_r` first, then alternating `∂_r`, `D_r`, ...
    pub fn di(&self, i: usize) -> Result<GridFunction> {
        self.check_order(i)?;
        Ok(self.compose(i, true))
    }

    /// `𝒟̄_i f = 𝒟_{i-1} ∂_r f`: `∂_r` first, then `D_r`, `∂_r`, ...
    pub fn dbar(&self, i: usize) -> Result<GridFunction> {
        self.check_order(i)?;
        Ok(self.compose(i, false))
    }

    fn compose(&self, i: usize, dr_first: bool) -> GridFunction {
        let mut out = self.clone();
        for step in 0..i {
            let use_dr = (step % 2 == 0) == dr_first;
            out = if use_dr { out.dr() } else { out.partial() };
        }
        out
    }

    fn check_order(&self, i: usize) -> Result<()> {
        let max = self.grid.max_operator_order();
        if i > max {
            return Err(Error::OrderTooHigh { order: i, max });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Index of the first non-finite value, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }

    /// `∫_0^1 f r^2 dr`.
    pub fn integrate_r2(&self) -> f64 {
        self.values.iter().zip(&self.grid.quad_r2).map(|(v, w)| v * w).sum()
    }

    /// `∫_0^1 f dr`.
    pub fn integrate(&self) -> f64 {
        self.values.iter().zip(&self.grid.quad_plain).map(|(v, w)| v * w).sum()
    }

    /// `∫_0^1 f^2 r^2 dr`.
    pub fn norm2_r2(&self) -> f64 {
        self.values.iter().zip(&self.grid.quad_r2).map(|(v, w)| v * v * w).sum()
    }

    /// CSV with columns `r,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,value\n");
        for (r, v) in self.grid.nodes.iter().zip(&self.values) {
            s.push_str(&format!("{r:.16e},{v:.16e}\n"));
        }
        s
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt, $parity:ident) => {
        impl $trait<&GridFunction> for &GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: &GridFunction) -> GridFunction {
                debug_assert_eq!(self.values.len(), rhs.values.len());
                let parity = self.parity.$parity(rhs.parity);
                self.zip_with(rhs, parity, |a, b| a $op b)
            }
        }
        impl $trait<GridFunction> for GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: GridFunction) -> GridFunction {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GridFunction> for GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: &GridFunction) -> GridFunction {
                (&self).$method(rhs)
            }
        }
        impl $trait<GridFunction> for &GridFunction {
            type Output = GridFunction;
            fn $method(self, rhs: GridFunction) -> GridFunction {
                self.$method(&rhs)
            }
        }
    };
}

binary_op!(Add, add, +, sum);
binary_op!(Sub, sub, -, sum);
binary_op!(Mul, mul, *, product);

impl Mul<f64> for &GridFunction {
    type Output = GridFunction;
    fn mul(self, c: f64) -> GridFunction {
        self.scale(c)
    }
}

impl Mul<f64> for GridFunction {
    type Output = GridFunction;
    fn mul(self, c: f64) -> GridFunction {
        self.scale(c)
    }
}

impl Neg for &GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.scale(-1.0)
    }
}

impl Neg for GridFunction {
    type Output = GridFunction;
    fn neg(self) -> GridFunction {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, p: usize) -> Arc<RadialGrid> {
        RadialGrid::new(n, p).unwrap()
    }

    #[test]
    fn rejects_small_or_odd_grids() {
        assert!(RadialGrid::new(8, 2).is_err());
        assert!(RadialGrid::new(32, 3).is_err());
    }

    #[test]
    fn nodes_avoid_origin() {
        let g = grid(16, 2);
        assert!(g.nodes()[0] >= g.h() / 4.0);
        assert!((g.nodes()[15] - (15.5 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn dr_examples() {
        for p in [2, 4] {
            let g = grid(32, p);
            let f = GridFunction::radius(&g);
            assert!((f.dr() - GridFunction::constant(&g, 3.0)).max_abs() < 1e-12);
            let f2 = GridFunction::from_fn(&g, Parity::Even, |r| r * r);
            let exact = GridFunction::from_fn(&g, Parity::Odd, |r| 4.0 * r);
            assert!((f2.dr() - exact).max_abs() < 1e-11);
            let c = GridFunction::constant(&g, 2.5);
            let exact = GridFunction::from_fn(&g, Parity::Odd, |r| 5.0 / r);
            assert!((c.dr() - exact).max_abs() < 1e-11);
        }
    }

    #[test]
    fn di_examples() {
        let g = grid(32, 4);
        let f = GridFunction::from_fn(&g, Parity::Even, |r| r * r);
        assert_eq!(f.di(0).unwrap(), f);
        let d2 = f.di(2).unwrap();
        assert!((d2 - GridFunction::constant(&g, 4.0)).max_abs() < 1e-10);
        assert!(matches!(f.di(5), Err(Error::OrderTooHigh { .. })));
    }

    #[test]
    fn quadrature_of_unit_against_r2() {
        for p in [2, 4] {
            let errs: Vec<f64> = [32, 64]
                .iter()
                .map(|&n| (GridFunction::constant(&grid(n, p), 1.0).integrate_r2() - 1.0 / 3.0).abs())
                .collect();
            let order = (errs[0] / errs[1]).log2();
            assert!(errs[1] < 1e-4);
            if errs[1] > 1e-14 {
                assert!(order > p as f64 - 0.3, "order {order} for p = {p}");
            }
        }
    }

    #[test]
    fn plain_quadrature_order_four() {
        let errs: Vec<f64> = [32, 64]
            .iter()
            .map(|&n| {
                let g = grid(n, 4);
                (GridFunction::from_fn(&g, Parity::None, |r| r.exp()).integrate() - (1f64.exp() - 1.0)).abs()
            })
            .collect();
        assert!((errs[0] / errs[1]).log2() > 3.7);
    }

    #[test]
    fn cumulative_integral_of_even_function() {
        let q = |s: f64| (s * s).cos() * s * s;
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&n| {
                let g = grid(n, 4);
                let f = GridFunction::from_fn(&g, Parity::Even, |r| (r * r).cos());
                let cum = g.cumulative_r2_integral(&f);
                g.nodes()
                    .iter()
                    .zip(&cum)
                    .map(|(&r, c)| {
                        // Fine Simpson reference.
                        let m = 2000;
                        let hh = r / m as f64;
                        let mut acc = q(0.0) + q(r);
                        for k in 1..m {
                            acc += if k % 2 == 1 { 4.0 } else { 2.0 } * q(k as f64 * hh);
                        }
                        (c - acc * hh / 3.0).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] < 1e-7);
        assert!((errs[0] / errs[1]).log2() > 3.7, "{errs:?}");
    }

    #[test]
    fn parity_algebra() {
        assert_eq!(Parity::Odd.product(Parity::Odd), Parity::Even);
        assert_eq!(Parity::Odd.product(Parity::Even), Parity::Odd);
        assert_eq!(Parity::None.product(Parity::Even), Parity::None);
        assert_eq!(Parity::Odd.sum(Parity::Even), Parity::None);
        assert_eq!(Parity::Odd.flip(), Parity::Even);
    }
}
