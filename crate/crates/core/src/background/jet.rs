//! Truncated Taylor series arithmetic.

/// Taylor coefficients `c[m] = f^{(m)}(x0) / m!` up to a fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let k = self.0.len().min(other.0.len());
        Jet((0..k)
            .map(|m| (0..=m).map(|i| self.0[i] * other.0[m - i]).sum())
            .collect())
    }

    /// `f^alpha` for `f(x0) > 0`.
    pub fn powf(&self, alpha: f64) -> Jet {
        let f = &self.0;
        let k = f.len();
        let mut u = vec![0.0; k];
        u[0] = f[0].powf(alpha);
        for m in 1..k {
            let s: f64 = (1..=m)
                .map(|j| (alpha * j as f64 - (m - j) as f64) * f[j] * u[m - j])
                .sum();
            u[m] = s / (m as f64 * f[0]);
        }
        Jet(u)
    }

    /// Derivative values `f^{(m)}(x0)`.
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.0
            .iter()
            .enumerate()
            .map(|(m, c)| {
                if m > 0 {
                    fact *= m as f64;
                }
                c * fact
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_of_linear_function() {
        // (2 + x)^{-1.5} at x = 0.
        let j = Jet(vec![2.0, 1.0, 0.0, 0.0]).powf(-1.5);
        let d = j.derivatives();
        assert!((d[0] - 2f64.powf(-1.5)).abs() < 1e-15);
        assert!((d[1] + 1.5 * 2f64.powf(-2.5)).abs() < 1e-15);
        assert!((d[2] - 1.5 * 2.5 * 2f64.powf(-3.5)).abs() < 1e-14);
        assert!((d[3] + 1.5 * 2.5 * 3.5 * 2f64.powf(-4.5)).abs() < 1e-14);
    }

    #[test]
    fn product_rule() {
        // sin * cos at 0 = sin(2x)/2.
        let s = Jet(vec![0.0, 1.0, 0.0, -1.0 / 6.0]);
        let c = Jet(vec![1.0, 0.0, -0.5, 0.0]);
        let p = s.mul(&c).derivatives();
        assert!((p[1] - 1.0).abs() < 1e-15);
        assert!((p[3] + 4.0).abs() < 1e-14);
    }
}
