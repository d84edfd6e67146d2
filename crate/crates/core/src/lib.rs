//! Photon-number statistics of ultrashort pulses that undergo self-phase
//! modulation in a Kerr medium and are then sent through a quadratic
//! (group-velocity) dispersive element.
//!
//! Two independent engines compute the Mandel parameter `Q`:
//!
//! * [`statistics`] evaluates the mean-field integrals `I1`, `I2` by direct
//!   numerical quadrature on a sampled time grid, for any phase profile;
//! * [`paraxial`] evaluates the closed-form expressions obtained for a Gaussian
//!   pulse whose nonlinear phase is expanded to second order around the peak.
//!
//! All internal quantities are dimensionless: time is measured in units of the
//! pulse half-duration `tau_p` and photon densities in photons per `tau_p`.
//! Physical units only appear in [`scenario`].

pub mod dispersion;
pub mod error;
pub mod model;
pub mod oracle;
pub mod paraxial;
pub mod scenario;
pub mod search;
pub mod spm;
pub mod statistics;
pub mod validation;

pub use num_complex::Complex64;

pub use dispersion::{DispersionParams, GvdSign, PropagationMethod, SpectralPropagator};
pub use error::{Error, Result};
pub use model::{
    make_gaussian_pulse, response_function, ComplexEnvelope, DetectionParams, MediumParams,
    PulseParams, TimeGrid,
};
pub use paraxial::{BranchConvention, ParaxialPoint};
pub use spm::{PhaseConvention, PhaseMode, SpmOptions};
pub use statistics::{DispersedField, MandelResult, QuadratureSpec};

/// Version string stamped into every emitted data row.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
