//! Scalar affine motions `a_tt = a^{2-3γ}` and the rescaled time `dτ/dt = 1/a`.

use serde::Serialize;

use crate::error::{Error, Result};

/// The exponents `d(γ)` and `b(γ) = d(γ) + 3 - 3γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaExponents {
    pub gamma: f64,
    pub d_exp: f64,
    pub b_exp: f64,
}

impl GammaExponents {
    /// Indicator of the `γ > 5/3` regime.
    pub fn above_five_thirds(&self) -> bool {
        self.gamma > 5.0 / 3.0
    }
}

/// Exponents `d(γ)`, `b(γ)` with the case split at `γ = 5/3`.
pub fn gamma_exponents(gamma: f64) -> Result<GammaExponents> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    let d_exp = if gamma <= 5.0 / 3.0 { 3.0 * gamma - 3.0 } else { 2.0 };
    let b_exp = if gamma <= 5.0 / 3.0 { 0.0 } else { 5.0 - 3.0 * gamma };
    Ok(GammaExponents { gamma, d_exp, b_exp })
}

/// One point of the background motion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AffineSample {
    pub t: f64,
    pub tau: f64,
    pub a: f64,
    pub a_t: f64,
    /// `a_τ = a a_t`.
    pub a_tau: f64,
}

/// When to stop integrating.
#[derive(Clone, Copy, Debug)]
pub enum Horizon {
    Time(f64),
    Tau(f64),
}

/// A densely sampled affine motion.
#[derive(Clone, Debug)]
pub struct AffineMotion {
    pub gamma: f64,
    pub exponents: GammaExponents,
    pub a0_init: f64,
    pub a1_init: f64,
    pub tol: f64,
    pub samples: Vec<AffineSample>,
    /// `a₁ = lim a_τ / a`.
    pub a1_limit: f64,
    /// `a₀ = d(γ)/2 a₁`.
    pub a0_rate: f64,
    /// Least-squares slope of `a_τ / a` against `τ` over the final tenth of
    /// the samples.
    pub tail_slope: f64,
}

/// Integrate `a_tt = a^{2-3γ}` on `[0, t_final]`.
pub fn integrate_affine(gamma: f64, a_init: f64, adot_init: f64, t_final: f64, tol: f64) -> Result<AffineMotion> {
    if !(t_final > 0.0) {
        return Err(Error::InvalidParameter(format!("t_final must be positive, got {t_final}")));
    }
    AffineMotion::integrate(gamma, a_init, adot_init, Horizon::Time(t_final), tol)
}

// Dormand-Prince 5(4) tableau; the system is autonomous, so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Largest step in `τ` between stored samples.
const MAX_DTAU: f64 = 0.02;

impl AffineMotion {
    /// Adaptive Dormand-Prince integration of `(a, a_t, τ)` up to `horizon`.
    pub fn integrate(gamma: f64, a_init: f64, adot_init: f64, horizon: Horizon, tol: f64) -> Result<AffineMotion> {
        let exponents = gamma_exponents(gamma)?;
        if !(a_init > 0.0) || !a_init.is_finite() {
            return Err(Error::InvalidParameter(format!("a(0) must be positive, got {a_init}")));
        }
        if !adot_init.is_finite() {
            return Err(Error::InvalidParameter("a'(0) must be finite".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        match horizon {
            Horizon::Time(t) if !(t > 0.0) => {
                return Err(Error::InvalidParameter(format!("t_final must be positive, got {t}")))
            }
            Horizon::Tau(s) if !(s > 0.0) => {
                return Err(Error::InvalidParameter(format!("tau_final must be positive, got {s}")))
            }
            _ => {}
        }

        let p = 2.0 - 3.0 * gamma;
        let f = |y: &[f64; 3]| -> [f64; 3] { [y[1], y[0].powf(p), 1.0 / y[0]] };

        let mut t = 0.0;
        let mut y = [a_init, adot_init, 0.0];
        let mut samples = vec![sample(t, &y)];
        let mut h = (0.01 * a_init).min(1e-3);
        let done = |t: f64, y: &[f64; 3]| match horizon {
            Horizon::Time(tf) => t >= tf,
            Horizon::Tau(sf) => y[2] >= sf,
        };

        while !done(t, &y) {
            let mut h_try = h.min(MAX_DTAU * y[0]);
            if let Horizon::Time(tf) = horizon {
                if t + h_try > tf {
                    h_try = tf - t;
                }
            }
            if h_try < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t, h: h_try });
            }

            let mut k = [[0.0; 3]; 7];
            k[0] = f(&y);
            for s in 1..7 {
                let mut ys = y;
                for (i, yi) in ys.iter_mut().enumerate() {
                    *yi += h_try * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
                }
                if !(ys[0] > 0.0) {
                    break;
                }
                k[s] = f(&ys);
            }
            let mut y5 = y;
            let mut err: f64 = 0.0;
            for i in 0..3 {
                let incr5: f64 = (0..7).map(|s| B5[s] * k[s][i]).sum();
                let incr4: f64 = (0..7).map(|s| B4[s] * k[s][i]).sum();
                y5[i] += h_try * incr5;
                let scale = tol * (1.0 + y[i].abs().max(y5[i].abs()));
                err = err.max((h_try * (incr5 - incr4)).abs() / scale);
            }
            if !y5.iter().all(|v| v.is_finite()) || !(y5[0] > 0.0) {
                if h_try < 1e-12 {
                    return Err(Error::IntegrationFailure { t, reason: "a left the positive half-line".into() });
                }
                h = 0.25 * h_try;
                continue;
            }
            if err <= 1.0 {
                t += h_try;
                y = y5;
                samples.push(sample(t, &y));
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h = h_try * grow;
            } else {
                h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }

        let (a1_limit, tail_slope) = estimate_a1(gamma, &samples);
        Ok(AffineMotion {
            gamma,
            exponents,
            a0_init: a_init,
            a1_init: adot_init,
            tol,
            a1_limit,
            a0_rate: 0.5 * exponents.d_exp * a1_limit,
            tail_slope,
            samples,
        })
    }

    pub fn t_final(&self) -> f64 {
        self.samples.last().unwrap().t
    }

    pub fn tau_final(&self) -> f64 {
        self.samples.last().unwrap().tau
    }

    fn interval_by_t(&self, t: f64) -> Result<usize> {
        let s = &self.samples;
        if !(t >= 0.0) || t > s[s.len() - 1].t * (1.0 + 1e-14) {
            return Err(Error::WindowMismatch(format!(
                "t = {t} outside the integrated range [0, {}]",
                s[s.len() - 1].t
            )));
        }
        let k = s.partition_point(|p| p.t <= t);
        Ok(k.clamp(1, s.len() - 1) - 1)
    }

    /// Interpolated state at physical time `t`.
    pub fn at_t(&self, t: f64) -> Result<AffineSample> {
        let k = self.interval_by_t(t)?;
        Ok(self.hermite(k, t))
    }

    /// Interpolated state at rescaled time `τ`.
    pub fn at_tau(&self, tau: f64) -> Result<AffineSample> {
        let t = self.t_of_tau(tau)?;
        self.at_t(t)
    }

    pub fn tau_of_t(&self, t: f64) -> Result<f64> {
        Ok(self.at_t(t)?.tau)
    }

    /// Invert `τ(t)` by Newton iteration on the interpolant.
    pub fn t_of_tau(&self, tau: f64) -> Result<f64> {
        let s = &self.samples;
        let last = s[s.len() - 1].tau;
        if !(tau >= 0.0) || tau > last * (1.0 + 1e-14) {
            return Err(Error::WindowMismatch(format!("tau = {tau} outside the integrated range [0, {last}]")));
        }
        let k = s.partition_point(|p| p.tau <= tau).clamp(1, s.len() - 1) - 1;
        let (lo, hi) = (s[k].t, s[k + 1].t);
        let frac = (tau - s[k].tau) / (s[k + 1].tau - s[k].tau);
        let mut t = lo + frac * (hi - lo);
        for _ in 0..50 {
            let p = self.hermite(k, t);
            let dt = (p.tau - tau) * p.a;
            t = (t - dt).clamp(lo, hi);
            if dt.abs() <= 1e-15 * t.abs().max(1.0) {
                break;
            }
        }
        Ok(t)
    }

    /// Quintic Hermite interpolation on step `k` using `(a, a_t, a_tt)` and
    /// `(τ, 1/a, -a_t/a^2)` at both ends.
    fn hermite(&self, k: usize, t: f64) -> AffineSample {
        let (p0, p1) = (&self.samples[k], &self.samples[k + 1]);
        let h = p1.t - p0.t;
        if h == 0.0 {
            return *p0;
        }
        let s = ((t - p0.t) / h).clamp(0.0, 1.0);
        let p = 2.0 - 3.0 * self.gamma;
        let (a, a_t) = quintic(s, h, [p0.a, p0.a_t, p0.a.powf(p)], [p1.a, p1.a_t, p1.a.powf(p)]);
        let dtau = |q: &AffineSample| [q.tau, 1.0 / q.a, -q.a_t / (q.a * q.a)];
        let (tau, _) = quintic(s, h, dtau(p0), dtau(p1));
        AffineSample { t, tau, a, a_t, a_tau: a * a_t }
    }

    /// `(τ, a(τ) e^{-a₁ τ})` at every stored sample.
    pub fn growth_ratio(&self) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .map(|p| (p.tau, p.a * (-self.a1_limit * p.tau).exp()))
            .collect()
    }

    /// CSV with columns `t,tau,a,a_t,a_tau`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,tau,a,a_t,a_tau\n");
        for p in &self.samples {
            s.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                p.t, p.tau, p.a, p.a_t, p.a_tau
            ));
        }
        s
    }
}

fn sample(t: f64, y: &[f64; 3]) -> AffineSample {
    AffineSample { t, tau: y[2], a: y[0], a_t: y[1], a_tau: y[0] * y[1] }
}

/// Quintic Hermite value and first derivative at `s ∈ [0, 1]` on a step of
/// width `h`, from value, first and second derivative at both ends.
fn quintic(s: f64, h: f64, y0: [f64; 3], y1: [f64; 3]) -> (f64, f64) {
    let (s2, s3) = (s * s, s * s * s);
    let (s4, s5) = (s3 * s, s3 * s2);
    let h00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    let h10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h20 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    let h01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    let h11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h21 = 0.5 * (s3 - 2.0 * s4 + s5);
    let d00 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    let d10 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    let d20 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    let d01 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    let d11 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    let d21 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
    let v = h00 * y0[0] + h * h10 * y0[1] + h * h * h20 * y0[2] + h01 * y1[0] + h * h11 * y1[1] + h * h * h21 * y1[2];
    let dv = (d00 * y0[0] + d01 * y1[0]) / h + d10 * y0[1] + d11 * y1[1] + h * (d20 * y0[2] + d21 * y1[2]);
    (v, dv)
}

/// Limit of `a_τ / a = a_t` from the final tenth of the samples.
///
/// Along the motion `a_t^2 + 2 a^{3-3γ}/(3γ-3)` is conserved, so `a_t^2` is
/// affine in `x = a^{3-3γ}` and its intercept at `x = 0` is `a₁^2`. The tail is
/// fitted in that variable. The raw slope of `a_t` against `τ` over the same
/// window is returned alongside.
fn estimate_a1(gamma: f64, samples: &[AffineSample]) -> (f64, f64) {
    let m = samples.len();
    let start = (m - m.div_ceil(10)).min(m.saturating_sub(2));
    let tail = &samples[start..];
    let xs: Vec<f64> = tail.iter().map(|p| p.a.powf(3.0 - 3.0 * gamma)).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.a_t * p.a_t).collect();
    let (intercept, _) = line_fit(&xs, &ys);
    let taus: Vec<f64> = tail.iter().map(|p| p.tau).collect();
    let rates: Vec<f64> = tail.iter().map(|p| p.a_t).collect();
    let (_, slope) = line_fit(&taus, &rates);
    (intercept.max(0.0).sqrt(), slope)
}

/// Least-squares line `y = c0 + c1 x`; returns `(c0, c1)`.
pub(crate) fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return (my, 0.0);
    }
    let c1 = sxy / sxx;
    (my - c1 * mx, c1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_cases() {
        let e = gamma_exponents(1.4).unwrap();
        assert!((e.d_exp - 1.2).abs() < 1e-15 && e.b_exp == 0.0);
        let e = gamma_exponents(5.0 / 3.0).unwrap();
        assert!((e.d_exp - 2.0).abs() < 1e-15 && e.b_exp == 0.0);
        let e = gamma_exponents(2.0).unwrap();
        assert!(e.d_exp == 2.0 && (e.b_exp + 1.0).abs() < 1e-15);
        assert!(gamma_exponents(1.0).is_err());
        assert!(gamma_exponents(0.5).is_err());
    }

    #[test]
    fn five_thirds_closed_form() {
        let m = integrate_affine(5.0 / 3.0, 1.0, 0.0, 10.0, 1e-11).unwrap();
        let err = m
            .samples
            .iter()
            .map(|p| (p.a - (1.0 + p.t * p.t).sqrt()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "err {err}");
        for k in 0..=200 {
            let t = 10.0 * k as f64 / 200.0;
            let p = m.at_t(t).unwrap();
            assert!((p.a - (1.0 + t * t).sqrt()).abs() < 1e-8);
            assert!((p.tau - t.asinh()).abs() < 1e-8);
        }
        assert!((m.a1_limit - 1.0).abs() < 1e-3);
        assert!((m.a0_rate - 1.0).abs() < 1e-3);
    }

    #[test]
    fn cosh_in_rescaled_time() {
        let m = AffineMotion::integrate(5.0 / 3.0, 1.0, 0.0, Horizon::Tau(6.0), 1e-11).unwrap();
        assert!(m.tau_final() >= 6.0);
        for k in 0..=60 {
            let tau = 0.1 * k as f64;
            let p = m.at_tau(tau).unwrap();
            assert!((p.a - tau.cosh()).abs() < 1e-9 * tau.cosh().max(1.0) * 10.0);
            assert!((p.tau - tau).abs() < 1e-12);
        }
    }

    #[test]
    fn reparametrization_round_trip() {
        let m = integrate_affine(1.4, 1.0, 0.3, 5.0, 1e-10).unwrap();
        for k in 0..50 {
            let t = 5.0 * k as f64 / 49.0;
            let back = m.t_of_tau(m.tau_of_t(t).unwrap()).unwrap();
            assert!((back - t).abs() < 1e-10);
        }
    }

    #[test]
    fn limits_for_each_regime() {
        for gamma in [1.4, 5.0 / 3.0, 2.0] {
            let m = AffineMotion::integrate(gamma, 1.0, 0.0, Horizon::Tau(8.0), 1e-11).unwrap();
            let expect = (2.0 / (3.0 * gamma - 3.0)).sqrt();
            assert!((m.a1_limit - expect).abs() < 1e-6, "gamma {gamma}: {}", m.a1_limit);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate_affine(1.4, -1.0, 0.0, 1.0, 1e-8).is_err());
        assert!(integrate_affine(1.4, 1.0, 0.0, -1.0, 1e-8).is_err());
        assert!(integrate_affine(1.4, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(integrate_affine(0.9, 1.0, 0.0, 1.0, 1e-8).is_err());
        let m = integrate_affine(1.4, 1.0, 0.0, 1.0, 1e-8).unwrap();
        assert!(matches!(m.at_t(2.0), Err(Error::WindowMismatch(_))));
    }

    #[test]
    fn contracting_start_turns_around() {
        let m = integrate_affine(1.4, 1.0, -0.5, 20.0, 1e-10).unwrap();
        assert!(m.samples.iter().all(|p| p.a > 0.0));
        let turn = m.samples.iter().position(|p| p.a_t > 0.0).unwrap();
        assert!(m.samples[turn..].windows(2).all(|w| w[1].a > w[0].a));
    }
}
