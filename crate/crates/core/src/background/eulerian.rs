//! Eulerian velocity, density and entropy of a (perturbed) affine motion.

use super::{AffineMotion, BackgroundProfile};
use crate::calculus::{GridFunction, Parity};
use crate::error::{Error, Result};
use crate::solver::PerturbationState;

/// Fields in the Lagrangian label `r`, at one physical time.
#[derive(Clone, Debug)]
pub struct EulerianFields {
    pub t: f64,
    /// `u = r χ_t`.
    pub u: GridFunction,
    /// `ρ = ρ̄ / (χ^2 (χ + r χ_r))`.
    pub rho: GridFunction,
    /// `S = ln d`.
    pub entropy: GridFunction,
}

/// Evaluate `(u, ρ, S)` at time `t`. With `state = None` the motion is
/// purely affine, `χ = a`; otherwise `χ = a (1 + H/r)` and the state's `τ`
/// must match `τ(t)`.
pub fn eulerian_fields(
    motion: &AffineMotion,
    profile: &BackgroundProfile,
    state: Option<&PerturbationState>,
    t: f64,
) -> Result<EulerianFields> {
    let s = motion.at_t(t)?;
    let grid = profile.grid();
    let (chi_t, jac) = match state {
        None => (GridFunction::constant(grid, s.a_t), GridFunction::constant(grid, 1.0)),
        Some(st) => {
            if (st.tau - s.tau).abs() > 1e-9 * s.tau.max(1.0) {
                return Err(Error::WindowMismatch(format!(
                    "state is at tau = {} but t = {t} corresponds to tau = {}",
                    st.tau, s.tau
                )));
            }
            let geo = st.geometry(profile.gamma());
            let chi_t = geo.xi.scale(s.a_t) + st.h_tau.over_r();
            (chi_t, geo.jac)
        }
    };
    if let Some((j, v)) = jac.values().iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::DegenerateFlowMap { r: grid.nodes()[j], value: *v });
    }
    let a3 = s.a.powi(3);
    let u = chi_t.times_r();
    let rho = profile.rho_bar().zip_with(&jac, Parity::None, |rho, j| rho / (a3 * j));
    let entropy = profile.d_weight().map(f64::ln);
    Ok(EulerianFields { t, u, rho, entropy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::{integrate_affine, PhiSpec};
    use crate::calculus::RadialGrid;

    #[test]
    fn affine_fields() {
        let grid = RadialGrid::new(64, 4).unwrap();
        let prof = BackgroundProfile::build(&PhiSpec::cubic_bump(), 1.4, &grid, 2).unwrap();
        let motion = integrate_affine(1.4, 1.0, 0.3, 3.0, 1e-11).unwrap();
        let f = eulerian_fields(&motion, &prof, None, 2.0).unwrap();
        let s = motion.at_t(2.0).unwrap();
        for (j, &r) in grid.nodes().iter().enumerate() {
            // u / x with the Eulerian radius x = a r.
            assert!((f.u.values()[j] / (s.a * r) - s.a_t / s.a).abs() < 1e-12);
            assert!((f.rho.values()[j] - prof.rho_bar().values()[j] / s.a.powi(3)).abs() < 1e-12);
        }
        let last = *f.entropy.values().last().unwrap();
        assert!(last < f.entropy.values()[0] - 3.0);
        assert!(eulerian_fields(&motion, &prof, None, 5.0).is_err());
    }
}
