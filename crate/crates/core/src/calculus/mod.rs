//! Radial grid, the operator hierarchy built from `D_r` and `∂_r`, the
//! vector-field classes, the cutoff `ψ` and weighted norms.

mod cutoff;
mod grid;
mod ops;
pub mod stencil;
pub mod survey;
mod words;

pub use cutoff::{psi, psi_prime};
pub use grid::{GridFunction, Parity, RadialGrid};
pub use ops::{
    adjoint_partial, apply_l0_flux, flux_weight, apply_lk, apply_lk_star, apply_script_l, commutator_composed, commutator_direct, compute_qminus, compute_qplus,
    compute_qplus_variant, product_rule_residual, weighted_norm,
};
pub use words::{enumerate_p, Letter, VectorFieldWord, WordClass, MAX_WORD_ORDER};
