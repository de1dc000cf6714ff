use serde::Serialize;

use super::state::PerturbationState;

/// Threshold shared by all four a-priori bounds.
pub const APRIORI_BOUND: f64 = 1.0 / 3.0;

/// Snapshot of the a-priori bounds `𝒮^N`, `|𝒥 - 1|`, `|∂_r θ|`, `|∂_r^2 θ| < 1/3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AprioriMonitor {
    pub sn: f64,
    pub j_dev: f64,
    pub dtheta: f64,
    pub d2theta: f64,
    pub sn_bound: bool,
    pub j_bound: bool,
    pub dth_bound: bool,
    pub d2th_bound: bool,
}

impl AprioriMonitor {
    /// Measure the pointwise bounds of `state`; `sn` is the running `𝒮^N`.
    pub fn measure(state: &PerturbationState, sn: f64) -> AprioriMonitor {
        let theta = state.theta();
        let theta_r = theta.partial();
        let theta_rr = theta_r.partial();
        let j_dev = state.jacobian().map(|j| j - 1.0).max_abs();
        let (dtheta, d2theta) = (theta_r.max_abs(), theta_rr.max_abs());
        let ok = |v: f64| v < APRIORI_BOUND;
        AprioriMonitor {
            sn,
            j_dev,
            dtheta,
            d2theta,
            sn_bound: ok(sn),
            j_bound: ok(j_dev),
            dth_bound: ok(dtheta),
            d2th_bound: ok(d2theta),
        }
    }

    pub fn all_ok(&self) -> bool {
        self.sn_bound && self.j_bound && self.dth_bound && self.d2th_bound
    }

    /// Names and values of the violated bounds.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.sn_bound {
            out.push(format!("S^N = {:.3e}", self.sn));
        }
        if !self.j_bound {
            out.push(format!("|J - 1| = {:.3e}", self.j_dev));
        }
        if !self.dth_bound {
            out.push(format!("|d_r theta| = {:.3e}", self.dtheta));
        }
        if !self.d2th_bound {
            out.push(format!("|d_r^2 theta| = {:.3e}", self.d2theta));
        }
        out
    }
}
