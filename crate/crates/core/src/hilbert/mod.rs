//! Labeled qubit registers, dense state vectors, Bell states and mixed
//! Bell-diagonal ensembles.

mod bell;
mod ensemble;
mod label;
mod state;

pub use bell::{
    bell_rotation, bell_weights, make_hyper_bell, BellLabel, HyperBellSpec, Parity, Sign,
};
pub use ensemble::MixedEnsemble;
pub use label::{Dof, NvUnit, PhotonId, QubitLabel};
pub use state::{
    fidelity, Basis, Matrix2, Matrix4, Measurement, MeasurementBranch, StateVector, MAX_QUBITS,
};
