//! Iteration scheme for `𝔥 = D_r H`.
//!
//! Given the iterate `H_j(τ)`, the next divergence `𝔥` solves the linear
//! problem with coefficients frozen at `H_j`:
//!
//! ```text
//! 𝔥_ττ = a^{3-3γ} [ γ e_j L_1^* 𝔥 + 𝔥 + F_j ] - (a_τ / a) 𝔥_τ
//! F_j  = D_r[H_j^2/r] - D_r[r R1 + r R2] + γ e_j Q_+ D_r H_j + γ ∂_r e_j L_0 H_j
//! ```
//!
//! and `H_{j+1} = r^{-2} ∫_0^r 𝔥 s^2 ds`.

use serde::{Deserialize, Serialize};

use super::equation::{EquationOptions, Model};
use super::remainders::remainders_from_geometry;
use super::state::{Geometry, PerturbationState};
use crate::background::{AffineMotion, BackgroundProfile};
use crate::calculus::{apply_l0_flux, apply_lk_star, compute_qplus, weighted_norm, GridFunction, Parity};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LwpControls {
    pub t_final: f64,
    pub j_max: usize,
    pub cfl: f64,
    pub dtau: Option<f64>,
    pub options: EquationOptions,
    /// Stop once the iterate difference falls below `tol` times the size of `H`.
    pub tol: f64,
}

impl Default for LwpControls {
    fn default() -> Self {
        LwpControls { t_final: 0.25, j_max: 12, cfl: 0.4, dtau: None, options: EquationOptions::default(), tol: 1e-13 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LwpStep {
    /// Index `j + 1` of the iterate just produced.
    pub iterate: usize,
    /// `max_τ (‖H_{j+1} - H_j‖_0^2 + ‖∂_τ H_{j+1} - ∂_τ H_j‖_0^2)^{1/2}`.
    pub difference: f64,
    /// Ratio to the previous difference.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct LwpResult {
    pub taus: Vec<f64>,
    pub h: Vec<GridFunction>,
    pub h_tau: Vec<GridFunction>,
    pub history: Vec<LwpStep>,
    /// `max_τ ‖D_r H - 𝔥‖_∞ / max(‖𝔥‖_∞, tiny)` for the last iterate.
    pub reconstruction_residual: f64,
    pub converged: bool,
    pub dtau: f64,
}

impl LwpResult {
    pub fn final_state(&self) -> PerturbationState {
        let k = self.taus.len() - 1;
        PerturbationState::new(self.taus[k], self.h[k].clone(), self.h_tau[k].clone())
    }

    /// Largest contraction ratio from iterate `from` on.
    pub fn max_ratio_from(&self, from: usize) -> Option<f64> {
        self.history
            .iter()
            .filter(|s| s.iterate > from)
            .filter_map(|s| s.ratio)
            .fold(None, |m, r| Some(m.map_or(r, |m: f64| m.max(r))))
    }
}

/// `r^{-2} ∫_0^r f s^2 ds`, the inverse of `D_r` on regular fields.
pub fn invert_divergence(f: &GridFunction) -> GridFunction {
    let grid = f.grid();
    let cum = grid.cumulative_r2_integral(f);
    let vals = cum.iter().zip(grid.nodes()).map(|(c, r)| c / (r * r)).collect();
    GridFunction::new(grid, vals, Parity::Odd)
}

struct Frozen {
    e: GridFunction,
    forcing: GridFunction,
}

fn frozen(h: &GridFunction, profile: &BackgroundProfile, options: EquationOptions) -> Frozen {
    let gamma = profile.gamma();
    let qplus = compute_qplus(0, profile);
    let dr_h = h.dr();
    match options.model {
        Model::Linear => Frozen { e: GridFunction::constant(h.grid(), 1.0), forcing: (qplus * &dr_h) * gamma },
        Model::Full => {
            let theta = h.over_r();
            let theta_r = theta.partial();
            let geo = Geometry::from_theta(gamma, theta.clone(), theta_r);
            let rem = remainders_from_geometry(&geo, &profile.a_coef(), gamma);
            let mut rr = &rem.r1 + &rem.r2;
            if options.include_r3 {
                rr = rr + &rem.r3;
            }
            let l0 = apply_l0_flux(h, profile);
            let forcing = (h * &theta).dr() - rr.times_r().dr()
                + (&geo.e * &qplus * &dr_h) * gamma
                + (geo.e.partial() * &l0) * gamma;
            Frozen { e: geo.e, forcing }
        }
    }
}

fn hermite_mid(h0: &GridFunction, h1: &GridFunction, v0: &GridFunction, v1: &GridFunction, dt: f64) -> GridFunction {
    (h0 + h1) * 0.5 + (v0 - v1) * (dt / 8.0)
}

/// Run the iteration from `initial` on `[0, controls.t_final]`.
pub fn lwp_iterate(
    initial: &PerturbationState,
    motion: &AffineMotion,
    profile: &BackgroundProfile,
    controls: &LwpControls,
) -> Result<LwpResult> {
    let t_final = controls.t_final;
    if !(t_final > 0.0) || t_final > motion.tau_final() {
        return Err(Error::InvalidParameter(format!("lwp horizon {t_final} outside (0, {}]", motion.tau_final())));
    }
    if controls.j_max < 1 {
        return Err(Error::InvalidParameter("need at least one iterate".into()));
    }
    let gamma = profile.gamma();
    let a_coef = profile.a_coef();
    let dt_target = match controls.dtau {
        Some(dt) if dt > 0.0 => dt,
        Some(dt) => return Err(Error::InvalidParameter(format!("dtau must be positive, got {dt}"))),
        None => {
            let e0 = initial.geometry(gamma).e;
            let peak = match controls.options.model {
                Model::Linear => a_coef.max_abs(),
                Model::Full => (&a_coef * &e0).max_abs(),
            };
            let bg = motion.at_tau(initial.tau)?;
            let c = (gamma * bg.a.powf(3.0 - 3.0 * gamma) * peak).sqrt();
            0.95 * controls.cfl * profile.grid().h() / c.max(1e-300)
        }
    };
    let m = (t_final / dt_target - 1e-9).ceil().max(1.0) as usize;
    let dt = t_final / m as f64;
    let taus: Vec<f64> = (0..=m).map(|s| initial.tau + s as f64 * dt).collect();
    let bgs = taus
        .iter()
        .map(|&t| motion.at_tau(t))
        .collect::<Result<Vec<_>>>()?;
    let mids = taus[..m]
        .iter()
        .map(|&t| motion.at_tau(t + 0.5 * dt))
        .collect::<Result<Vec<_>>>()?;

    let zero = GridFunction::zeros(profile.grid(), Parity::Odd);
    let mut h_cur: Vec<GridFunction> = vec![initial.h.clone(); m + 1];
    let mut v_cur: Vec<GridFunction> = vec![zero.clone(); m + 1];
    let mut history: Vec<LwpStep> = Vec::new();
    let mut frak_last: Vec<GridFunction> = Vec::new();
    let mut above_one = 0;
    let mut converged = false;

    for j in 1..=controls.j_max {
        // Frozen coefficients at steps and midpoints.
        let at_steps: Vec<Frozen> = h_cur.iter().map(|h| frozen(h, profile, controls.options)).collect();
        let at_mids: Vec<Frozen> = (0..m)
            .map(|s| frozen(&hermite_mid(&h_cur[s], &h_cur[s + 1], &v_cur[s], &v_cur[s + 1], dt), profile, controls.options))
            .collect();

        let accel = |f: &GridFunction, v: &GridFunction, fz: &Frozen, bg: &crate::background::AffineSample| {
            let w = bg.a.powf(3.0 - 3.0 * gamma);
            let l = apply_lk_star(1, f, profile);
            ((&fz.e * &l) * gamma + f + &fz.forcing) * w - v * (bg.a_tau / bg.a)
        };

        let mut frak = initial.h.dr();
        let mut frak_v = initial.h_tau.dr();
        let mut fr = vec![frak.clone()];
        let mut fv = vec![frak_v.clone()];
        for s in 0..m {
            let (f0, v0) = (&frak, &frak_v);
            let k1v = accel(f0, v0, &at_steps[s], &bgs[s]);
            let k1f = v0.clone();
            let f2 = f0 + &k1f * (0.5 * dt);
            let v2 = v0 + &k1v * (0.5 * dt);
            let k2v = accel(&f2, &v2, &at_mids[s], &mids[s]);
            let k2f = v2;
            let f3 = f0 + &k2f * (0.5 * dt);
            let v3 = v0 + &k2v * (0.5 * dt);
            let k3v = accel(&f3, &v3, &at_mids[s], &mids[s]);
            let k3f = v3;
            let f4 = f0 + &k3f * dt;
            let v4 = v0 + &k3v * dt;
            let k4v = accel(&f4, &v4, &at_steps[s + 1], &bgs[s + 1]);
            let k4f = v4;
            let nf = (f0 + (k1f + (k2f + k3f) * 2.0 + k4f) * (dt / 6.0)).with_parity(Parity::Even);
            let nv = (v0 + (k1v + (k2v + k3v) * 2.0 + k4v) * (dt / 6.0)).with_parity(Parity::Even);
            if let Some(k) = nf.first_non_finite().or(nv.first_non_finite()) {
                return Err(Error::BlowUp { tau: taus[s + 1], r: profile.grid().nodes()[k] });
            }
            frak = nf;
            frak_v = nv;
            fr.push(frak.clone());
            fv.push(frak_v.clone());
        }

        let h_next: Vec<GridFunction> = fr.iter().map(invert_divergence).collect();
        let v_next: Vec<GridFunction> = fv.iter().map(invert_divergence).collect();
        let mut diff: f64 = 0.0;
        let mut size: f64 = 0.0;
        for s in 0..=m {
            let dh = weighted_norm(&(&h_next[s] - &h_cur[s]), 0, profile);
            let dv = weighted_norm(&(&v_next[s] - &v_cur[s]), 0, profile);
            diff = diff.max((dh + dv).sqrt());
            size = size.max((weighted_norm(&h_next[s], 0, profile) + weighted_norm(&v_next[s], 0, profile)).sqrt());
        }
        let ratio = history.last().map(|p: &LwpStep| if p.difference > 0.0 { diff / p.difference } else { 0.0 });
        history.push(LwpStep { iterate: j + 1, difference: diff, ratio });
        h_cur = h_next;
        v_cur = v_next;
        frak_last = fr;

        if ratio.is_some_and(|r| r >= 1.0) {
            above_one += 1;
            if above_one >= 3 {
                return Err(Error::IterationDiverged { iterate: j + 1 });
            }
        } else {
            above_one = 0;
        }
        if diff <= controls.tol * size.max(f64::MIN_POSITIVE) || diff == 0.0 {
            converged = true;
            break;
        }
    }

    let reconstruction_residual = h_cur
        .iter()
        .zip(&frak_last)
        .map(|(h, f)| (h.dr() - f).max_abs() / f.max_abs().max(1e-300))
        .fold(0.0, f64::max);
    Ok(LwpResult { taus, h: h_cur, h_tau: v_cur, history, reconstruction_residual, converged, dtau: dt })
}
