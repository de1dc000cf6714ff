//! The elliptic operators `L_k`, `L_k^*` and their commutator coefficients.
//!
//! With `A = ρ̄^{γ-1} d` and `B_k` from [`BackgroundProfile::b_coef`], the
//! product rule gives
//!
//! ```text
//! L_k f   = A ∂_r(D_r f) + B_k D_r f
//! L_k^* h = A D_r(∂_r h) + B_k ∂_r h
//! ```
//!
//! so the weight `d^{-k}` never multiplies a vanishing quantity.

use super::grid::{GridFunction, Parity};
use crate::background::BackgroundProfile;

/// `L_k f = ρ̄^{-1-k(γ-1)} d^{-k} ∂_r(ρ̄^{γ+k(γ-1)} d^{1+k} D_r f)`.
pub fn apply_lk(k: usize, f: &GridFunction, profile: &BackgroundProfile) -> GridFunction {
    let g = f.dr();
    profile.a_coef() * g.partial() + profile.b_coef(k) * g
}

/// `L_k^* h = ρ̄^{-1-k(γ-1)} d^{-k} D_r(ρ̄^{γ+k(γ-1)} d^{1+k} ∂_r h)`.
pub fn apply_lk_star(k: usize, h: &GridFunction, profile: &BackgroundProfile) -> GridFunction {
    let g = h.partial();
    profile.a_coef() * g.dr() + profile.b_coef(k) * g
}

/// `∂_r f` written as `r^{-2} ∂_r(r^2 f) - 2 f / r`. On even `f` this is
/// minus the transpose of the discrete `D_r` in the `r^2 dr` quadrature.
pub fn adjoint_partial(f: &GridFunction) -> GridFunction {
    let r2f = f.times_r().times_r();
    r2f.partial().over_r().over_r() - f.over_r() * 2.0
}

/// `L_0 h = ρ̄^{-1} ∂_r(ρ̄^γ d D_r h)` in flux form, with the outer derivative
/// from [`adjoint_partial`]. The discrete operator is symmetric and
/// nonpositive for the weight `ρ̄ r^2 dr`, which is what keeps explicit time
/// stepping stable near the origin; the product-rule form of [`apply_lk`] is
/// not, and develops growing modes at `r ~ h`.
pub fn apply_l0_flux(h: &GridFunction, profile: &BackgroundProfile) -> GridFunction {
    let q = (flux_weight(profile) * h.dr()).with_parity(Parity::Even);
    let rho = profile.rho_bar();
    adjoint_partial(&q).zip_with(rho, h.parity(), |v, r| v / r)
}

/// `ρ̄^γ d`, extended evenly through the origin as `ρ̄(|x|)` is.
pub fn flux_weight(profile: &BackgroundProfile) -> GridFunction {
    let g = profile.gamma();
    profile.rho_bar().zip_with(profile.d_weight(), Parity::Even, |rho, d| rho.powf(g) * d)
}

/// `ℒ_i`: `L_i` for even `i`, `L_i^*` for odd `i`.
pub fn apply_script_l(i: usize, f: &GridFunction, profile: &BackgroundProfile) -> GridFunction {
    if i.is_multiple_of(2) {
        apply_lk(i, f, profile)
    } else {
        apply_lk_star(i, f, profile)
    }
}

/// `Q_+ = D_r B_k = B_k' + 2 B_k / r`, so that
/// `D_r L_k f = L_{k+1}^* D_r f + Q_+ D_r f`.
pub fn compute_qplus(k: usize, profile: &BackgroundProfile) -> GridFunction {
    profile.b_coef_prime(k) + profile.b_coef(k).over_r() * 2.0
}

/// `Q_- = B_k' - 2 B_k / r`, so that
/// `∂_r L_k^* h = L_{k+1} ∂_r h + Q_- ∂_r h`.
pub fn compute_qminus(k: usize, profile: &BackgroundProfile) -> GridFunction {
    profile.b_coef_prime(k) - profile.b_coef(k).over_r() * 2.0
}

/// The closed form of `Q_+` with the `ρ̄^{γ-2} ρ̄' d'` coefficient taken as
/// `2(1+k)(γ-1)`. It differs from [`compute_qplus`] by `ρ̄^{γ-2} ρ̄' d'` and
/// is kept only to show that the commutator identity then fails for
/// non-constant densities.
pub fn compute_qplus_variant(k: usize, profile: &BackgroundProfile) -> GridFunction {
    let g = profile.gamma();
    let ck = g + k as f64 * (g - 1.0);
    let kk = 1.0 + k as f64;
    let vals = (0..profile.grid().n())
        .map(|j| {
            let r = profile.grid().nodes()[j];
            let (rho, rho1, rho2) = (profile.rho(0).values()[j], profile.rho(1).values()[j], profile.rho(2).values()[j]);
            let (d, d1, d2) = (profile.d(0).values()[j], profile.d(1).values()[j], profile.d(2).values()[j]);
            (2.0 * ck * rho.powf(g - 2.0) * rho1 * d + 2.0 * kk * rho.powf(g - 1.0) * d1) / r
                + ck * ((g - 2.0) * rho.powf(g - 3.0) * rho1 * rho1 + rho.powf(g - 2.0) * rho2) * d
                + 2.0 * kk * (g - 1.0) * rho.powf(g - 2.0) * rho1 * d1
                + kk * rho.powf(g - 1.0) * d2
        })
        .collect();
    GridFunction::new(profile.grid(), vals, profile.parity())
}

/// `‖f‖_k^2 = ∫_0^1 d^k f^2 r^2 dr`.
pub fn weighted_norm(f: &GridFunction, k: usize, profile: &BackgroundProfile) -> f64 {
    let d = profile.d_weight().values();
    f.values()
        .iter()
        .zip(profile.grid().quad_r2_weights())
        .zip(d)
        .map(|((v, w), dj)| w * dj.powi(k as i32) * v * v)
        .sum()
}

/// Commutator remainder `S_m = 𝒟_m L_0 H - ℒ_m 𝒟_m H` assembled from the
/// one-step identities: `S_0 = 0`, `S_{m+1} = D_r S_m + Q_+^{(m)} 𝒟_{m+1} H`
/// for even `m`, `S_{m+1} = ∂_r S_m + Q_-^{(m)} 𝒟_{m+1} H` for odd `m`.
pub fn commutator_composed(m: usize, h: &GridFunction, profile: &BackgroundProfile) -> crate::Result<GridFunction> {
    let mut s = GridFunction::zeros(h.grid(), h.parity());
    let mut dh = h.clone();
    for step in 0..m {
        if step % 2 == 0 {
            dh = dh.dr();
            s = s.dr() + compute_qplus(step, profile) * &dh;
        } else {
            dh = dh.partial();
            s = s.partial() + compute_qminus(step, profile) * &dh;
        }
    }
    // Validate the order through the public path.
    h.di(m)?;
    Ok(s)
}

/// `S_m` by direct difference of the two sides.
pub fn commutator_direct(m: usize, h: &GridFunction, profile: &BackgroundProfile) -> crate::Result<GridFunction> {
    let left = apply_lk(0, h, profile).di(m)?;
    let right = apply_script_l(m, &h.di(m)?, profile);
    Ok(left - right)
}

/// `𝒟_i(fg) - (𝒟_i f) g - 𝒟̄_{i-1}(f ∂_r g) - 𝒟̄_{i-1}(g D_r f) + g 𝒟̄_{i-1} D_r f`
/// for `i >= 1`; vanishes up to discretisation error.
pub fn product_rule_residual(i: usize, f: &GridFunction, g: &GridFunction) -> crate::Result<GridFunction> {
    if i == 0 {
        return Err(crate::Error::InvalidParameter("product rule needs i >= 1".into()));
    }
    let fg = f * g;
    let dr_f = f.dr();
    let rhs = f.di(i)? * g + (f * g.partial()).dbar(i - 1)? + (g * &dr_f).dbar(i - 1)? - g * dr_f.dbar(i - 1)?;
    Ok(fg.di(i)? - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::PhiSpec;
    use crate::calculus::RadialGrid;

    fn constant_profile(n: usize, p: usize) -> BackgroundProfile {
        BackgroundProfile::build(&PhiSpec::constant(), 1.4, &RadialGrid::new(n, p).unwrap(), 3).unwrap()
    }

    #[test]
    fn l0_examples_for_constant_density() {
        let prof = constant_profile(64, 4);
        let g = prof.grid();
        let f = GridFunction::radius(g);
        let expect = GridFunction::from_fn(g, Parity::Odd, |r| -3.0 * r);
        assert!((apply_lk(0, &f, &prof) - expect).max_abs() < 1e-11);

        // D_r c = 2c/r is singular at the origin; compare on [1/2, 1] of a finer grid.
        let fine = constant_profile(256, 4);
        let gf = fine.grid();
        let c = GridFunction::constant(gf, 0.7);
        let expect = GridFunction::from_fn(gf, Parity::None, |r| 2.0 * 0.7 * (-0.5 - 0.5 / (r * r)));
        let got = apply_lk(0, &c, &fine);
        let rel = (&got - &expect).values()[gf.n() / 2..].iter().fold(0.0f64, |m, x| m.max(x.abs())) / 1.4;
        assert!(rel < 1e-6, "rel {rel}");

        let annihilated = GridFunction::from_fn(gf, Parity::Even, |r| 0.3 / (r * r));
        for k in 0..3 {
            let v = apply_lk(k, &annihilated, &fine);
            // D_r (c/r^2) vanishes up to the stencil error of a singular function.
            let interior = v.values()[gf.n() / 2..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!(interior < 1e-5, "k = {k}: {interior}");
        }
    }

    #[test]
    fn qplus_for_constant_density_has_only_weight_terms() {
        let prof = constant_profile(64, 4);
        // B_0 = d' = -r, B_0' = -1, so Q_+ = -1 - 2 = -3 and Q_- = -1 + 2 = 1.
        assert!((compute_qplus(0, &prof) + GridFunction::constant(prof.grid(), 3.0)).max_abs() < 1e-12);
        assert!((compute_qminus(0, &prof) - GridFunction::constant(prof.grid(), 1.0)).max_abs() < 1e-12);
        assert!((compute_qplus_variant(0, &prof) - compute_qplus(0, &prof)).max_abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_examples() {
        let prof = constant_profile(256, 4);
        let one = GridFunction::constant(prof.grid(), 1.0);
        assert!((weighted_norm(&one, 0, &prof) - 1.0 / 3.0).abs() < 1e-9);
        assert!((weighted_norm(&one, 1, &prof) - 1.0 / 15.0).abs() < 1e-9);
        let zero = GridFunction::zeros(prof.grid(), Parity::Odd);
        assert_eq!(weighted_norm(&zero, 3, &prof), 0.0);
    }

    #[test]
    fn composed_and_direct_commutators_agree() {
        for (_, spec) in PhiSpec::corpus() {
            let prof = BackgroundProfile::build(&spec, 1.6, &RadialGrid::new(256, 4).unwrap(), 4).unwrap();
            let h = GridFunction::from_fn(prof.grid(), Parity::Odd, |r| r.sin() + 0.3 * r.powi(3));
            for m in 0..=2 {
                let a = commutator_composed(m, &h, &prof).unwrap();
                let b = commutator_direct(m, &h, &prof).unwrap();
                let scale = b.max_abs().max(1.0);
                assert!((a - b).max_abs() / scale < 1e-5, "m = {m}");
            }
        }
    }
}
