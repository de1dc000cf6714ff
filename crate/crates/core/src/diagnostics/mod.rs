//! Weighted norms, the energy identity, and empirical checks of the
//! norm-energy equivalence, coercivity and decay.

mod checks;
mod energy;
mod norms;

pub use checks::{check_coercivity, check_norm_energy_equivalence, fit_decay, DecayFit, NormEnergyConstants};
pub use energy::{compute_energy_identity_terms, energy_identity_residual, EnergyReport, IdentityResidual};
pub use norms::{compute_sn, sn_instant, sn_series};
