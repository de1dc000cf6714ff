//! Finite-difference and interpolation weights on arbitrary node sets.

/// Fornberg's algorithm: weights `w[m][j]` such that the `m`-th derivative at
/// `x0` is approximated by `sum_j w[m][j] f(x[j])`, for `m = 0..=max_deriv`.
pub fn fornberg(x0: f64, x: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; max_deriv + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Weights `w[j]` such that `sum_j w[j] f(x[j])` equals the integral over
/// `[a, b]` of the interpolating polynomial through the nodes `x`.
pub fn integration_weights(x: &[f64], a: f64, b: f64) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            // Expand the k-th Lagrange basis polynomial in monomials.
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for (j, &xj) in x.iter().enumerate() {
                if j == k {
                    continue;
                }
                let mut next = vec![0.0; poly.len() + 1];
                for (p, &cp) in poly.iter().enumerate() {
                    next[p + 1] += cp;
                    next[p] -= xj * cp;
                }
                poly = next;
                denom *= x[k] - xj;
            }
            let integral: f64 = poly
                .iter()
                .enumerate()
                .map(|(p, &cp)| {
                    let e = (p + 1) as i32;
                    cp * (b.powi(e) - a.powi(e)) / (p + 1) as f64
                })
                .sum();
            integral / denom
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_second_order_derivative() {
        let w = fornberg(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[1][0] + 0.5).abs() < 1e-15);
        assert!(w[1][1].abs() < 1e-15);
        assert!((w[1][2] - 0.5).abs() < 1e-15);
        assert!((w[2][0] - 1.0).abs() < 1e-15);
        assert!((w[2][1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn centered_fourth_order_derivative() {
        let w = fornberg(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w[1].iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn extrapolation_reproduces_polynomials() {
        let x: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let w = fornberg(-1.5, &x, 0);
        let f = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) - 0.1 * t.powi(4);
        let approx: f64 = x.iter().zip(&w[0]).map(|(&t, &wt)| wt * f(t)).sum();
        assert!((approx - f(-1.5)).abs() < 1e-11);
    }

    #[test]
    fn four_point_segment_rule() {
        let w = integration_weights(&[-1.0, 0.0, 1.0, 2.0], 0.0, 1.0);
        let expect = [-1.0 / 24.0, 13.0 / 24.0, 13.0 / 24.0, -1.0 / 24.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
