//! Simulation of Hanle / EIT / EIA coherence resonances in a single
//! Zeeman-degenerate two-level transition driven by linearly polarized
//! light, including parametric (lock-in) detection of a modulated
//! longitudinal magnetic field and collisional decoherence of the excited
//! state.
//!
//! Units: rates are in units of the excited-state decay rate `Γ = 1` and
//! magnetic fields enter as Larmor frequencies `μ_B B / ħ`.

pub mod angular;
pub mod cli;
pub mod doppler;
pub mod error;
pub mod linalg;
pub mod liouvillian;
pub mod oracle;
pub mod parametric;
pub mod steady;

pub use angular::{AngularState, Polarization};
pub use error::{Error, Result};
pub use liouvillian::{build_superoperator, source_vector, DensityMatrix, Superoperator, SystemParams};
pub use parametric::{scan_b0, SignalPoint};
pub use steady::{absorption, steady_state};
