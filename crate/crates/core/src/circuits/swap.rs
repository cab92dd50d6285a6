//! SWAP gates.
//!
//! The polarization SWAP between two photons uses one NV prepared in
//! (|+1⟩+|−1⟩)/√2. The L components of both photons are reflected, the NV
//! and both polarizations are Hadamard-rotated, the R components are
//! reflected, and the rotations are undone. Measuring the NV in {|+1⟩, |−1⟩}
//! leaves the swapped polarizations up to σ_z^P ⊗ σ_z^P, which is applied on
//! the +1 outcome.
//!
//! The SWAPs between a photon's polarization and one of its spatial DOFs are
//! lossless linear-optics relabelings.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::cavity::{InteractionMode, ReflectionPair, Spin};
use crate::error::{argument, domain, Result};
use crate::hilbert::{Basis, Dof, NvUnit, PhotonId, QubitLabel, StateVector};
use crate::optics::{apply_all, Arm, GateOp};

#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutcome {
    pub nv_result: Spin,
    pub corrections_applied: Vec<GateOp>,
    /// Squared norm after the interaction relative to the input.
    pub survival: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapBranch {
    pub outcome: SwapOutcome,
    /// Conditional probability of this NV result given survival.
    pub probability: f64,
    /// Normalized state with the NV removed and corrections applied.
    pub state: StateVector,
}

/// Gate list of the polarization SWAP (NV preparation and measurement
/// excluded).
pub fn pp_swap_gates(
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Vec<GateOp> {
    let pass = |arm| {
        [photon1, photon2].map(|photon| GateOp::ConditionalScatter {
            photon,
            arm,
            unit,
            mode,
            refl: *refl,
        })
    };
    let rotate = [
        GateOp::hwp_hadamard_p(photon1),
        GateOp::hwp_hadamard_p(photon2),
    ];
    let mut gates = Vec::with_capacity(10);
    gates.extend(pass(Arm::When(Dof::P, 1)));
    gates.push(GateOp::NvHadamard(unit));
    gates.extend(rotate);
    gates.extend(pass(Arm::When(Dof::P, 0)));
    gates.extend(rotate);
    gates.push(GateOp::NvHadamard(unit));
    gates
}

/// Corrections applied when the NV is found in `spin`.
pub fn pp_swap_corrections(photon1: PhotonId, photon2: PhotonId, spin: Spin) -> Vec<GateOp> {
    match spin {
        Spin::Plus => vec![GateOp::sigma_z_p(photon1), GateOp::sigma_z_p(photon2)],
        Spin::Minus => Vec::new(),
    }
}

fn check_pair(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
) -> Result<()> {
    if photon1 == photon2 {
        return Err(argument("the polarization SWAP needs two distinct photons"));
    }
    if state.contains(QubitLabel::Nv(unit)) {
        return Err(argument(format!("{unit} is already in the register")));
    }
    if state.norm_sqr() <= 0.0 {
        return Err(domain("SWAP input has zero norm"));
    }
    Ok(())
}

/// Runs the polarization SWAP with the NV left unmeasured.
pub fn pp_swap_evolve(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<StateVector> {
    check_pair(state, photon1, photon2, unit)?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let prepared = state.tensor(&StateVector::qubit(QubitLabel::Nv(unit), h, h))?;
    apply_all(
        &prepared,
        &pp_swap_gates(photon1, photon2, unit, mode, refl),
    )
}

/// The polarization SWAP with the feed-forward replaced by a σ_z^P ⊗ σ_z^P
/// controlled on the NV being |+1⟩. The NV stays in the register.
pub fn pp_swap_coherent(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<StateVector> {
    let evolved = pp_swap_evolve(state, photon1, photon2, unit, mode, refl)?;
    let labels = [
        QubitLabel::photon(photon1, Dof::P),
        QubitLabel::photon(photon2, Dof::P),
        QubitLabel::Nv(unit),
    ];
    evolved.apply_diagonal(&labels, |b| {
        let flip = b[2] == 0 && (b[0] ^ b[1]) == 1;
        Complex64::new(if flip { -1.0 } else { 1.0 }, 0.0)
    })
}

/// Projects the NV onto `spin`, removes it and applies the matching
/// corrections. The result is not renormalized.
pub fn pp_swap_project(
    evolved: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    spin: Spin,
) -> Result<(StateVector, Vec<GateOp>)> {
    let v = Basis::computational().vectors[spin.bit() as usize];
    let projected = evolved.project(QubitLabel::Nv(unit), &v)?;
    let corrections = pp_swap_corrections(photon1, photon2, spin);
    Ok((apply_all(&projected, &corrections)?, corrections))
}

/// Polarization SWAP with the NV measured and the feed-forward applied.
/// Returns both NV results that have nonzero probability.
pub fn pp_swap(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Vec<SwapBranch>> {
    let evolved = pp_swap_evolve(state, photon1, photon2, unit, mode, refl)?;
    let kept = evolved.norm_sqr();
    if kept <= 0.0 {
        return Err(domain("every photon component was absorbed"));
    }
    let survival = kept / state.norm_sqr();
    let mut out = Vec::with_capacity(2);
    for spin in [Spin::Plus, Spin::Minus] {
        let (raw, corrections) = pp_swap_project(&evolved, photon1, photon2, unit, spin)?;
        let mass = raw.norm_sqr();
        if mass > 0.0 {
            out.push(SwapBranch {
                outcome: SwapOutcome {
                    nv_result: spin,
                    corrections_applied: corrections,
                    survival,
                },
                probability: mass / kept,
                state: raw.normalized()?,
            });
        }
    }
    Ok(out)
}

fn local_swap(state: &StateVector, photon: PhotonId, other: Dof) -> Result<StateVector> {
    let (p, o) = (
        QubitLabel::photon(photon, Dof::P),
        QubitLabel::photon(photon, other),
    );
    for (label, dof) in [(p, Dof::P), (o, other)] {
        if !state.contains(label) {
            return Err(argument(format!("photon {photon} carries no {dof} qubit")));
        }
    }
    state.swap_qubits(p, o)
}

/// Exchanges a photon's polarization and first spatial qubit.
pub fn pf_swap(state: &StateVector, photon: PhotonId) -> Result<StateVector> {
    local_swap(state, photon, Dof::F)
}

/// Exchanges a photon's polarization and second spatial qubit.
pub fn ps_swap(state: &StateVector, photon: PhotonId) -> Result<StateVector> {
    local_swap(state, photon, Dof::S)
}

/// Exchanges a photon's polarization and third spatial qubit.
pub fn pt_swap(state: &StateVector, photon: PhotonId) -> Result<StateVector> {
    local_swap(state, photon, Dof::T)
}
