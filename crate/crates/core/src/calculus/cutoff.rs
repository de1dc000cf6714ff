//! Smooth cutoff equal to one near the origin and zero near the boundary.

/// `ψ = 1` on `[0, 1/2]`, `ψ = 0` on `[3/4, 1]`, quintic smoothstep between.
pub fn psi(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 0.75 {
        0.0
    } else {
        let s = (r - 0.5) / 0.25;
        1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

/// Derivative of [`psi`].
pub fn psi_prime(r: f64) -> f64 {
    if r <= 0.5 || r >= 0.75 {
        0.0
    } else {
        let s = (r - 0.5) / 0.25;
        -30.0 * s * s * (1.0 - s) * (1.0 - s) / 0.25
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(psi(0.1), 1.0);
        assert_eq!(psi(0.5), 1.0);
        assert_eq!(psi(0.8), 0.0);
        assert!((psi(0.625) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 0..=100 {
            let r = k as f64 / 100.0;
            assert!(psi(r) <= prev + 1e-15);
            assert!(psi_prime(r) <= 0.0);
            prev = psi(r);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for k in 1..20 {
            let r = 0.5 + 0.25 * k as f64 / 20.0;
            let fd = (psi(r + 1e-6) - psi(r - 1e-6)) / 2e-6;
            assert!((fd - psi_prime(r)).abs() < 1e-6);
        }
    }
}
