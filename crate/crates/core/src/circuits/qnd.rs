//! Parity-check QND measurements.
//!
//! Each NV starts in φ⁺ = (|+1⟩+|−1⟩)/√2. A photon component routed to a
//! unit first passes a σ_z^P plate and is then reflected, so in the ideal
//! limit both polarizations pick up (−1)^s from spin s. Two photons in the
//! same parity class leave the NV in φ⁺, opposite classes flip it to φ⁻.
//!
//! * polarization check: the L arm of each photon meets the unit;
//! * spatial check: the l arm (F) of each photon meets unit 1, then the
//!   I arm (S) of each photon meets unit 2.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::cavity::{InteractionMode, ReflectionPair};
use crate::error::{domain, Result};
use crate::hilbert::{Basis, Dof, NvUnit, Parity, PhotonId, QubitLabel, StateVector};
use crate::optics::{apply_all, Arm, GateOp};

/// Parities flagged by a QND; DOFs the device does not check are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QndOutcome {
    pub p_parity: Option<Parity>,
    pub f_parity: Option<Parity>,
    pub s_parity: Option<Parity>,
    /// Squared norm after the interaction relative to the input.
    pub survival: f64,
}

impl QndOutcome {
    pub fn parity(&self, dof: Dof) -> Option<Parity> {
        match dof {
            Dof::P => self.p_parity,
            Dof::F => self.f_parity,
            Dof::S => self.s_parity,
            Dof::T => None,
        }
    }
}

/// One measurement record of a QND.
#[derive(Debug, Clone, PartialEq)]
pub struct QndBranch {
    pub outcome: QndOutcome,
    /// Conditional probability of this record given survival.
    pub probability: f64,
    /// Normalized photonic state with the NV spins removed.
    pub state: StateVector,
}

fn phi_plus(unit: NvUnit) -> StateVector {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::qubit(QubitLabel::Nv(unit), h, h)
}

fn arm_check(
    photon: PhotonId,
    arm: Arm,
    unit: NvUnit,
    mode: InteractionMode,
    refl: ReflectionPair,
) -> [GateOp; 2] {
    [
        GateOp::ArmSigmaZP { photon, arm },
        GateOp::ConditionalScatter {
            photon,
            arm,
            unit,
            mode,
            refl,
        },
    ]
}

/// Gate list of the polarization check (NV preparation excluded).
pub fn p_qnd_gates(
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Vec<GateOp> {
    let arm = Arm::When(Dof::P, 1);
    [photon1, photon2]
        .into_iter()
        .flat_map(|ph| arm_check(ph, arm, unit, mode, *refl))
        .collect()
}

/// Gate list of the spatial check (NV preparation excluded).
pub fn s_qnd_gates(
    photon1: PhotonId,
    photon2: PhotonId,
    unit1: NvUnit,
    unit2: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Vec<GateOp> {
    let f_arm = Arm::When(Dof::F, 1);
    let s_arm = Arm::When(Dof::S, 1);
    let mut gates = Vec::with_capacity(8);
    for ph in [photon1, photon2] {
        gates.extend(arm_check(ph, f_arm, unit1, mode, *refl));
    }
    for ph in [photon1, photon2] {
        gates.extend(arm_check(ph, s_arm, unit2, mode, *refl));
    }
    gates
}

fn check_fresh(state: &StateVector, units: &[NvUnit]) -> Result<()> {
    if state.norm_sqr() <= 0.0 {
        return Err(domain("QND input has zero norm"));
    }
    if let Some(u) = units.iter().find(|u| state.contains(QubitLabel::Nv(**u))) {
        return Err(crate::error::argument(format!(
            "{u} is already in the register"
        )));
    }
    Ok(())
}

/// Prepares the NV in φ⁺ and runs the polarization check, keeping the spin
/// unmeasured.
pub fn p_qnd_evolve(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<StateVector> {
    check_fresh(state, &[unit])?;
    let prepared = state.tensor(&phi_plus(unit))?;
    apply_all(&prepared, &p_qnd_gates(photon1, photon2, unit, mode, refl))
}

/// Prepares both NVs in φ⁺ and runs the spatial check, spins unmeasured.
pub fn s_qnd_evolve(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit1: NvUnit,
    unit2: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<StateVector> {
    if unit1 == unit2 {
        return Err(crate::error::argument(
            "the spatial check needs two distinct NV units",
        ));
    }
    check_fresh(state, &[unit1, unit2])?;
    let prepared = state.tensor(&phi_plus(unit1))?.tensor(&phi_plus(unit2))?;
    apply_all(
        &prepared,
        &s_qnd_gates(photon1, photon2, unit1, unit2, mode, refl),
    )
}

/// Branches lighter than this fraction of the input are rounding residue.
const BRANCH_NOISE: f64 = 1e-24;

/// Projects each unit onto φ⁺ (even) or φ⁻ (odd) and removes it. Returns
/// every outcome combination with a non-negligible, unnormalized branch
/// state.
pub fn project_parities(
    state: &StateVector,
    units: &[NvUnit],
) -> Result<Vec<(Vec<Parity>, StateVector)>> {
    let basis = Basis::nv_phi();
    let floor = BRANCH_NOISE * state.norm_sqr();
    let mut branches = vec![(Vec::new(), state.clone())];
    for unit in units {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (record, s) in branches {
            for (k, v) in basis.vectors.iter().enumerate() {
                let projected = s.project(QubitLabel::Nv(*unit), v)?;
                if projected.norm_sqr() > floor {
                    let mut r = record.clone();
                    r.push(Parity::from_bit(k as u8));
                    next.push((r, projected));
                }
            }
        }
        branches = next;
    }
    Ok(branches)
}

fn to_branches(
    input_norm: f64,
    raw: Vec<(Vec<Parity>, StateVector)>,
    assign: impl Fn(&[Parity]) -> (Option<Parity>, Option<Parity>, Option<Parity>),
) -> Result<Vec<QndBranch>> {
    let survival_mass: f64 = raw.iter().map(|(_, s)| s.norm_sqr()).sum();
    raw.into_iter()
        .map(|(record, s)| {
            let (p_parity, f_parity, s_parity) = assign(&record);
            Ok(QndBranch {
                outcome: QndOutcome {
                    p_parity,
                    f_parity,
                    s_parity,
                    survival: survival_mass / input_norm,
                },
                probability: s.norm_sqr() / survival_mass,
                state: s.normalized()?,
            })
        })
        .collect()
}

/// Polarization parity check with the NV measured in {φ⁺, φ⁻}.
pub fn p_qnd(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Vec<QndBranch>> {
    let evolved = p_qnd_evolve(state, photon1, photon2, unit, mode, refl)?;
    if evolved.norm_sqr() <= 0.0 {
        return Err(domain("every photon component was absorbed"));
    }
    let raw = project_parities(&evolved, &[unit])?;
    to_branches(state.norm_sqr(), raw, |r| (Some(r[0]), None, None))
}

/// Spatial parity check: unit 1 flags the F parity, unit 2 the S parity.
pub fn s_qnd(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    unit1: NvUnit,
    unit2: NvUnit,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Vec<QndBranch>> {
    let evolved = s_qnd_evolve(state, photon1, photon2, unit1, unit2, mode, refl)?;
    if evolved.norm_sqr() <= 0.0 {
        return Err(domain("every photon component was absorbed"));
    }
    let raw = project_parities(&evolved, &[unit1, unit2])?;
    to_branches(state.norm_sqr(), raw, |r| (None, Some(r[0]), Some(r[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{make_hyper_bell, BellLabel, HyperBellSpec};

    const AB: (PhotonId, PhotonId) = (PhotonId::A, PhotonId::B);

    #[test]
    fn ideal_p_qnd_flags_polarization_parity() {
        let refl = ReflectionPair::ideal();
        for p in BellLabel::ALL {
            let spec = HyperBellSpec::new(p, BellLabel::PSI_MINUS, BellLabel::PHI_PLUS);
            let input = make_hyper_bell(spec, AB).unwrap();
            let branches =
                p_qnd(&input, AB.0, AB.1, NvUnit(0), InteractionMode::Ideal, &refl).unwrap();
            assert_eq!(branches.len(), 1);
            assert_eq!(branches[0].outcome.p_parity, Some(p.parity));
            assert!((branches[0].probability - 1.0).abs() < 1e-12);
            assert!(branches[0].state.max_abs_diff(&input).unwrap() < 1e-12);
        }
    }

    #[test]
    fn ideal_s_qnd_examples() {
        let refl = ReflectionPair::ideal();
        let cases = [
            (
                HyperBellSpec::new(
                    BellLabel::PSI_PLUS,
                    BellLabel::PHI_PLUS,
                    BellLabel::PSI_PLUS,
                ),
                Parity::Even,
                Parity::Odd,
            ),
            (
                HyperBellSpec::new(
                    BellLabel::PSI_PLUS,
                    BellLabel::PSI_PLUS,
                    BellLabel::PHI_PLUS,
                ),
                Parity::Odd,
                Parity::Even,
            ),
        ];
        for (spec, f, s) in cases {
            let input = make_hyper_bell(spec, AB).unwrap();
            let b = s_qnd(
                &input,
                AB.0,
                AB.1,
                NvUnit(1),
                NvUnit(2),
                InteractionMode::Ideal,
                &refl,
            )
            .unwrap();
            assert_eq!(b.len(), 1);
            assert_eq!(
                (b[0].outcome.f_parity, b[0].outcome.s_parity),
                (Some(f), Some(s))
            );
            assert!(b[0].state.max_abs_diff(&input).unwrap() < 1e-12);
        }
    }

    #[test]
    fn reused_unit_is_rejected() {
        let input = make_hyper_bell(HyperBellSpec::uniform(BellLabel::PHI_PLUS), AB).unwrap();
        let refl = ReflectionPair::ideal();
        assert!(s_qnd(
            &input,
            AB.0,
            AB.1,
            NvUnit(1),
            NvUnit(1),
            InteractionMode::Ideal,
            &refl
        )
        .is_err());
        let with_nv =
            p_qnd_evolve(&input, AB.0, AB.1, NvUnit(0), InteractionMode::Ideal, &refl).unwrap();
        assert!(p_qnd_evolve(
            &with_nv,
            AB.0,
            AB.1,
            NvUnit(0),
            InteractionMode::Ideal,
            &refl
        )
        .is_err());
    }

    #[test]
    fn realistic_branches_account_for_loss() {
        let refl = ReflectionPair::resonant(0.9);
        let input = make_hyper_bell(HyperBellSpec::uniform(BellLabel::PSI_PLUS), AB).unwrap();
        let b = s_qnd(
            &input,
            AB.0,
            AB.1,
            NvUnit(1),
            NvUnit(2),
            InteractionMode::Realistic,
            &refl,
        )
        .unwrap();
        let total: f64 = b.iter().map(|x| x.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(b[0].outcome.survival < 1.0);
    }
}
