//! Amplitude-level simulation of NV-cavity assisted hyperentanglement
//! purification for two-photon states entangled in polarization and two
//! (optionally three) longitudinal-momentum degrees of freedom.
//!
//! The crate is organised bottom-up:
//!
//! * [`cavity`]: reflection coefficients and the photon-spin scattering rule.
//! * [`hilbert`]: labeled registers, state vectors, Bell states, ensembles.
//! * [`optics`]: wave plates, beam splitters and the conditional NV scatter.
//! * [`circuits`]: parity-check QNDs and the SWAP gates.
//! * [`protocol`]: the two-step purification round and its bookkeeping.
//! * [`analytics`]: closed-form fidelities, efficiencies and figure tables.
//! * [`validation`]: circuit-vs-formula self checks.

pub mod analytics;
pub mod cavity;
pub mod circuits;
mod error;
pub mod hilbert;
pub mod optics;
pub mod protocol;
pub mod validation;

pub use error::{Error, Result};
