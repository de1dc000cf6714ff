//! Evolution of the radial perturbation `H` about the affine motion.

mod equation;
mod initial;
mod integrate;
mod lwp;
mod manufactured;
mod monitor;
mod remainders;
mod state;

pub use equation::{
    rhs_from_fields, rhs_h, rhs_theta, step, Equation, EquationOptions, Forcing, Model, RhsFields,
    JACOBIAN_FLOOR,
};
pub use initial::InitialData;
pub use integrate::{solve, Controls, Trajectory, TrajectorySample};
pub use lwp::{invert_divergence, lwp_iterate, LwpControls, LwpResult, LwpStep};
pub use manufactured::ManufacturedSolution;
pub use monitor::{AprioriMonitor, APRIORI_BOUND};
pub use remainders::{compute_remainders, remainders_from_geometry, Remainders};
pub use state::{Geometry, PerturbationState};
