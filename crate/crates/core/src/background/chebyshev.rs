//! Chebyshev series on `[0, 1]` fitted to tabulated values.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `f(r) = Σ c_k T_k(2r - 1)`.
#[derive(Clone, Debug)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Least-squares fit of degree `min(len - 1, max_degree)`.
    pub fn fit(r: &[f64], values: &[f64], max_degree: usize) -> Result<ChebSeries> {
        let m = r.len();
        let deg = (m - 1).min(max_degree);
        let a = DMatrix::from_fn(m, deg + 1, |i, k| cheb_t(k, 2.0 * r[i] - 1.0));
        let b = DVector::from_column_slice(values);
        let svd = a.svd(true, true);
        let c = svd
            .solve(&b, 1e-13)
            .map_err(|e| Error::InvalidProfile(format!("table fit failed: {e}")))?;
        Ok(ChebSeries { coeffs: c.iter().copied().collect() })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, r: f64) -> f64 {
        clenshaw(&self.coeffs, 2.0 * r - 1.0)
    }

    /// Series of `d/dr`.
    pub fn derivative(&self) -> ChebSeries {
        let c = &self.coeffs;
        let n = c.len();
        if n <= 1 {
            return ChebSeries { coeffs: vec![0.0] };
        }
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        // Chain rule for x = 2r - 1.
        ChebSeries { coeffs: d.iter().map(|v| 2.0 * v).collect() }
    }
}

fn cheb_t(k: usize, x: f64) -> f64 {
    let (mut t0, mut t1) = (1.0, x);
    match k {
        0 => t0,
        1 => t1,
        _ => {
            for _ in 1..k {
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    }
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    c[0] + x * b1 - b2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_exponential_and_derivative() {
        let m = 40;
        let r: Vec<f64> = (0..=m)
            .map(|k| 0.5 - 0.5 * (std::f64::consts::PI * k as f64 / m as f64).cos())
            .collect();
        let v: Vec<f64> = r.iter().map(|x| (-x * x).exp()).collect();
        let s = ChebSeries::fit(&r, &v, 40).unwrap();
        for k in 0..50 {
            let x = k as f64 / 49.0;
            assert!((s.eval(x) - (-x * x).exp()).abs() < 1e-13);
            let d = s.derivative().eval(x);
            assert!((d + 2.0 * x * (-x * x).exp()).abs() < 1e-11);
        }
    }
}
