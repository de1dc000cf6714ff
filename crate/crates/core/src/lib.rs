//! Affine expanding gas motions with positive density and a free vacuum
//! boundary: background construction, the perturbation equation, weighted
//! energies and an independent Lagrangian referee.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod background;
pub mod calculus;
pub mod diagnostics;
mod error;
pub mod harness;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
