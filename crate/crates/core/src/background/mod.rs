//! The affine background: the scalar motion `a`, the rescaled time `τ`, the
//! exponents `d(γ)`, `b(γ)`, the density `ρ̄` and the entropy weight `d`.

mod affine;
mod chebyshev;
mod eulerian;
mod jet;
mod profile;

pub use affine::{gamma_exponents, integrate_affine, AffineMotion, AffineSample, GammaExponents, Horizon};
pub(crate) use affine::line_fit;
pub use chebyshev::ChebSeries;
pub use eulerian::{eulerian_fields, EulerianFields};
pub use jet::Jet;
pub use profile::{BackgroundProfile, PhiSpec};
