//! The weighted energy identity
//!
//! ```text
//! d/dτ ℰ_i + 𝒟_i = Z_1^i + ... + Z_7^i
//! ```
//!
//! obtained by applying `𝒟_i` to the `H` equation multiplied by `a^d`,
//! pairing with `𝒟_i H_τ` against `d^i r^2 dr` and integrating the elliptic
//! term by parts.

use serde::Serialize;

use super::norms::{quad, sn_instant};
use crate::background::{gamma_exponents, AffineMotion, BackgroundProfile};
use crate::calculus::{apply_l0_flux, commutator_composed, commutator_direct, GridFunction, Parity};
use crate::error::{Error, Result};
use crate::solver::{remainders_from_geometry, AprioriMonitor, EquationOptions, Geometry, Model, PerturbationState};

/// Highest order for which `C_i` is assembled from the one-step identities.
const COMPOSED_MAX: usize = 2;

/// Energy, dissipation, coercive correction and `Z` terms at one instant.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyReport {
    pub tau: f64,
    pub order: usize,
    /// Instantaneous `𝒮^N`; the caller takes the running supremum.
    pub sn: f64,
    /// `ℰ_i`, `i = 0..=N`.
    pub e: Vec<f64>,
    /// `𝒟_i`, `i = 0..=N`.
    pub d: Vec<f64>,
    /// The two parts of `𝒟_i`: the `(2 - d)/2` part and the `-γ b/2` part.
    pub d_parts: Vec<[f64; 2]>,
    /// `𝒞_{i,γ}`, `i = 0..N`, zero unless `γ > 5/3`.
    pub c: Vec<f64>,
    /// `Z_j^i` with `z[i][j - 1]`.
    pub z: Vec<[f64; 7]>,
    pub apriori: AprioriMonitor,
    /// Set when some `C_i` came from the direct difference `𝒟_i L_0 H - ℒ_i 𝒟_i H`.
    pub c_direct: bool,
}

impl EnergyReport {
    /// `ℰ^N`.
    pub fn energy(&self) -> f64 {
        self.e.iter().sum()
    }

    /// `𝒟^N`.
    pub fn dissipation(&self) -> f64 {
        self.d.iter().sum()
    }

    /// `𝒞^{N-1}`.
    pub fn correction(&self) -> f64 {
        self.c.iter().sum()
    }

    /// `Σ_{i,j} Z_j^i`.
    pub fn z_total(&self) -> f64 {
        self.z.iter().flatten().sum()
    }

    /// `Σ_{i,j} |Z_j^i|`.
    pub fn z_abs(&self) -> f64 {
        self.z.iter().flatten().map(|v| v.abs()).sum()
    }
}

/// Evaluate every term of the identity at `state`.
pub fn compute_energy_identity_terms(
    state: &PerturbationState,
    motion: &AffineMotion,
    profile: &BackgroundProfile,
    n: usize,
    options: EquationOptions,
) -> Result<EnergyReport> {
    let gamma = profile.gamma();
    let ex = gamma_exponents(gamma)?;
    let bg = motion.at_tau(state.tau)?;
    let (a, a_tau) = (bg.a, bg.a_tau);
    let (dg, bb) = (ex.d_exp, ex.b_exp);
    let ad = a.powf(dg);
    let ab = a.powf(bb);
    let grid = profile.grid();
    let h = &state.h;
    let ht = &state.h_tau;
    // Validate the highest order used before any work.
    h.di(n + 1)?;

    let linear = options.model == Model::Linear;
    let geo = if linear { Geometry::affine(grid) } else { state.geometry(gamma) };
    if let Some(j) = geo.jac.values().iter().position(|v| *v <= 0.0) {
        return Err(Error::DegenerateFlowMap { r: grid.nodes()[j], value: geo.jac.values()[j] });
    }
    let e = if linear { GridFunction::constant(grid, 1.0) } else { geo.e.clone() };
    let e_r = if linear { GridFunction::zeros(grid, Parity::Odd) } else { e.partial() };
    let e_tau = if linear {
        GridFunction::zeros(grid, Parity::Even)
    } else {
        let theta_tau = ht.over_r();
        let dr_ht = ht.dr();
        let mut vals = Vec::with_capacity(grid.n());
        for j in 0..grid.n() {
            let xi = geo.xi.values()[j];
            let q = geo.q.values()[j];
            let jac = geo.jac.values()[j];
            let tt = theta_tau.values()[j];
            let q_tau = dr_ht.values()[j] - 2.0 * tt;
            let j_tau = 2.0 * xi * tt * (1.0 + q) + xi * xi * q_tau;
            vals.push(4.0 * xi.powi(3) * tt * jac.powf(-gamma - 1.0) - (gamma + 1.0) * xi.powi(4) * jac.powf(-gamma - 2.0) * j_tau);
        }
        GridFunction::new(grid, vals, Parity::Even)
    };

    let rho = profile.rho_bar().values();
    let rho_r = profile.rho(1).values();
    let dw = profile.d_weight().values();
    let l0 = apply_l0_flux(h, profile);
    let x = l0.dr();
    let h_theta = if linear { GridFunction::zeros(grid, Parity::Odd) } else { h * &geo.theta };
    let rem_term = if linear {
        GridFunction::zeros(grid, Parity::Odd)
    } else {
        let rem = remainders_from_geometry(&geo, &profile.a_coef(), gamma);
        let mut rr = &rem.r1 + &rem.r2;
        if options.include_r3 {
            rr = rr + &rem.r3;
        }
        rr.times_r()
    };
    let er_l0 = &e_r * &l0;

    let mut out = EnergyReport {
        tau: state.tau,
        order: n,
        sn: sn_instant(state, &bg, profile, n)?,
        e: Vec::with_capacity(n + 1),
        d: Vec::with_capacity(n + 1),
        d_parts: Vec::with_capacity(n + 1),
        c: Vec::with_capacity(n),
        z: Vec::with_capacity(n + 1),
        apriori: AprioriMonitor::default(),
        c_direct: false,
    };
    out.apriori = AprioriMonitor::measure(state, out.sn);

    for i in 0..=n {
        let m = 1.0 + i as f64 * (gamma - 1.0);
        let w: Vec<f64> = dw.iter().map(|d| d.powi(i as i32)).collect();
        // ρ̄^{γ-1} d · d^i
        let p: Vec<f64> = (0..grid.n()).map(|j| rho[j].powf(gamma - 1.0) * dw[j] * w[j]).collect();
        let di_h = h.di(i)?;
        let di_ht = ht.di(i)?;
        let di1_h = h.di(i + 1)?;
        let sq_ht = quad(&(&di_ht * &di_ht), &w);
        let e_sq = quad(&(&e * &di1_h * &di1_h), &p);

        out.e.push(0.5 * ad * sq_ht + 0.5 * gamma * ab * e_sq);
        let d1 = 0.5 * (2.0 - dg) * a.powf(dg - 1.0) * a_tau * sq_ht;
        let d2 = -0.5 * gamma * bb * a.powf(bb - 1.0) * a_tau * e_sq;
        out.d.push(d1 + d2);
        out.d_parts.push([d1, d2]);
        if i < n {
            let c = if ex.above_five_thirds() {
                let wd: Vec<f64> = (0..grid.n()).map(|j| rho[j].powf(gamma - 1.0) * dw[j].powi(i as i32 + 1)).collect();
                0.5 * gamma * quad(&(&e * &di1_h * &di1_h), &wd)
            } else {
                0.0
            };
            out.c.push(c);
        }

        let mut z = [0.0; 7];
        z[0] = ab * quad(&(&di_h * &di_ht), &w);
        if !linear {
            z[1] = ab * quad(&(h_theta.di(i)? * &di_ht), &w);
            z[2] = 0.5 * gamma * ab * quad(&(&e_tau * &di1_h * &di1_h), &p);
            z[4] = -ab * quad(&(rem_term.di(i)? * &di_ht), &w);
        }
        let pz: Vec<f64> = (0..grid.n())
            .map(|j| p[j] * (e_r.values()[j] - m * e.values()[j] * rho_r[j] / rho[j]))
            .collect();
        z[3] = -gamma * ab * quad(&(&di1_h * &di_ht), &pz);
        if i >= 1 {
            let c_i = if i <= COMPOSED_MAX {
                let s = commutator_composed(i, h, profile)?;
                let base = &e * s;
                if i == 2 { base + &e_r * &x } else { base }
            } else {
                out.c_direct = true;
                let s = commutator_direct(i, h, profile)?;
                &e * s + (&e * &x).dbar(i - 1)? - &e * x.dbar(i - 1)?
            };
            z[5] = gamma * ab * quad(&(c_i * &di_ht), &w);
            if !linear {
                z[6] = gamma * ab * quad(&(er_l0.dbar(i - 1)? * &di_ht), &w);
            }
        }
        out.z.push(z);
    }
    Ok(out)
}

/// Residual of `d/dτ ℰ^N + 𝒟^N - Σ Z` along uniformly spaced reports.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityResidual {
    /// `(τ, residual)` at interior samples.
    pub pointwise: Vec<(f64, f64)>,
    /// `Σ |residual| / Σ (|dℰ/dτ| + |𝒟| + Σ|Z|)`.
    pub relative: f64,
    pub absolute: f64,
}

/// Differentiate `ℰ^N` with the fourth-order central difference and compare
/// against the right-hand side. Needs at least five uniformly spaced reports.
pub fn energy_identity_residual(reports: &[EnergyReport]) -> Result<IdentityResidual> {
    if reports.len() < 5 {
        return Err(Error::InsufficientSamples(format!("need at least 5 reports, got {}", reports.len())));
    }
    let dt = reports[1].tau - reports[0].tau;
    if !(dt > 0.0) || reports.windows(2).any(|w| ((w[1].tau - w[0].tau) - dt).abs() > 1e-9 * dt.max(1.0)) {
        return Err(Error::InvalidParameter("reports must be uniformly spaced in tau".into()));
    }
    let en: Vec<f64> = reports.iter().map(EnergyReport::energy).collect();
    let mut pointwise = Vec::new();
    let (mut num, mut den) = (0.0, 0.0);
    for k in 2..reports.len() - 2 {
        let de = (en[k - 2] - 8.0 * en[k - 1] + 8.0 * en[k + 1] - en[k + 2]) / (12.0 * dt);
        let r = &reports[k];
        let res = de + r.dissipation() - r.z_total();
        pointwise.push((r.tau, res));
        num += res.abs();
        den += de.abs() + r.dissipation().abs() + r.z_abs();
    }
    let relative = if den > 0.0 { num / den } else { 0.0 };
    Ok(IdentityResidual { pointwise, relative, absolute: num * dt })
}
