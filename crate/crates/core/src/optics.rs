//! Primitive gates: wave plates, beam-splitter Hadamards, Pauli flips, NV spin
//! rotations and the conditional photon-NV scatter.
//!
//! Path routing by polarizing beam splitters and optical switches is not
//! modeled with explicit path qubits. A component acting on one arm of an
//! interferometer is instead an operator diagonal in that photon's basis
//! bits, active only on basis states satisfying an [`Arm`] condition.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::cavity::{scatter, InteractionMode, Polarization, ReflectionPair, Spin};
use crate::error::Result;
use crate::hilbert::{Dof, Matrix2, NvUnit, PhotonId, QubitLabel, StateVector};

/// Which basis states of a photon a path-local component sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    /// Every component of the photon.
    Any,
    /// Only components whose `dof` qubit has the given bit value.
    When(Dof, u8),
}

impl Arm {
    pub fn admits(self, bits_of: impl Fn(Dof) -> u8) -> bool {
        match self {
            Arm::Any => true,
            Arm::When(dof, bit) => bits_of(dof) == bit & 1,
        }
    }

    fn dofs(self) -> Vec<Dof> {
        match self {
            Arm::Any => Vec::new(),
            Arm::When(dof, _) => vec![dof],
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arm::Any => f.write_str("all arms"),
            Arm::When(dof, bit) => write!(f, "{} arm", dof.symbols()[*bit as usize & 1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    /// |0⟩ → (|0⟩+|1⟩)/√2, |1⟩ → (|0⟩−|1⟩)/√2 on one DOF (half-wave plate
    /// for P, 50:50 beam splitter for spatial DOFs).
    Hadamard { photon: PhotonId, dof: Dof },
    /// |0⟩⟨0| − |1⟩⟨1|.
    SigmaZ { photon: PhotonId, dof: Dof },
    /// |0⟩⟨1| + |1⟩⟨0|.
    SigmaX { photon: PhotonId, dof: Dof },
    /// |+1⟩ → (|+1⟩+|−1⟩)/√2, |−1⟩ → (|+1⟩−|−1⟩)/√2.
    NvHadamard(NvUnit),
    /// A σ_z^P wave plate placed in one arm only.
    ArmSigmaZP { photon: PhotonId, arm: Arm },
    /// Reflection of the photon's components in `arm` off the NV-cavity unit.
    ConditionalScatter {
        photon: PhotonId,
        arm: Arm,
        unit: NvUnit,
        mode: InteractionMode,
        refl: ReflectionPair,
    },
}

impl GateOp {
    pub fn hwp_hadamard_p(photon: PhotonId) -> Self {
        GateOp::Hadamard {
            photon,
            dof: Dof::P,
        }
    }
    pub fn bs_hadamard_f(photon: PhotonId) -> Self {
        GateOp::Hadamard {
            photon,
            dof: Dof::F,
        }
    }
    pub fn bs_hadamard_s(photon: PhotonId) -> Self {
        GateOp::Hadamard {
            photon,
            dof: Dof::S,
        }
    }
    pub fn sigma_z_p(photon: PhotonId) -> Self {
        GateOp::SigmaZ {
            photon,
            dof: Dof::P,
        }
    }
    pub fn sigma_x_p(photon: PhotonId) -> Self {
        GateOp::SigmaX {
            photon,
            dof: Dof::P,
        }
    }
    pub fn sigma_z_f(photon: PhotonId) -> Self {
        GateOp::SigmaZ {
            photon,
            dof: Dof::F,
        }
    }
    pub fn sigma_z_s(photon: PhotonId) -> Self {
        GateOp::SigmaZ {
            photon,
            dof: Dof::S,
        }
    }
    pub fn sigma_x_f(photon: PhotonId) -> Self {
        GateOp::SigmaX {
            photon,
            dof: Dof::F,
        }
    }
    pub fn sigma_x_s(photon: PhotonId) -> Self {
        GateOp::SigmaX {
            photon,
            dof: Dof::S,
        }
    }

    /// True for every variant except the scatter, whose realistic factors
    /// are contractions.
    pub fn is_unitary(&self) -> bool {
        match self {
            GateOp::ConditionalScatter { mode, .. } => *mode == InteractionMode::Ideal,
            _ => true,
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Hadamard { photon, dof } => write!(f, "H^{dof}({photon})"),
            GateOp::SigmaZ { photon, dof } => write!(f, "sigma_z^{dof}({photon})"),
            GateOp::SigmaX { photon, dof } => write!(f, "sigma_x^{dof}({photon})"),
            GateOp::NvHadamard(unit) => write!(f, "H({unit})"),
            GateOp::ArmSigmaZP { photon, arm } => write!(f, "sigma_z^P({photon}, {arm})"),
            GateOp::ConditionalScatter {
                photon,
                arm,
                unit,
                mode,
                ..
            } => {
                write!(f, "scatter({photon}, {arm}, {unit}, {})", mode.name())
            }
        }
    }
}

/// The local action of a gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalOperator {
    /// A 2×2 matrix `m[row][col]` on one qubit.
    Single { target: QubitLabel, matrix: Matrix2 },
    /// Diagonal factors `factors[pol][spin]` on the photon's components in
    /// `arm`; without a unit the spin index is ignored (column 0 is used).
    Conditioned {
        photon: PhotonId,
        arm: Arm,
        unit: Option<NvUnit>,
        factors: Matrix2,
    },
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn hadamard() -> Matrix2 {
    let h = FRAC_1_SQRT_2;
    [[c(h), c(h)], [c(h), c(-h)]]
}

pub fn sigma_z() -> Matrix2 {
    [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]]
}

pub fn sigma_x() -> Matrix2 {
    [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]
}

pub fn matrix_of(gate: &GateOp) -> LocalOperator {
    match *gate {
        GateOp::Hadamard { photon, dof } => LocalOperator::Single {
            target: QubitLabel::photon(photon, dof),
            matrix: hadamard(),
        },
        GateOp::SigmaZ { photon, dof } => LocalOperator::Single {
            target: QubitLabel::photon(photon, dof),
            matrix: sigma_z(),
        },
        GateOp::SigmaX { photon, dof } => LocalOperator::Single {
            target: QubitLabel::photon(photon, dof),
            matrix: sigma_x(),
        },
        GateOp::NvHadamard(unit) => LocalOperator::Single {
            target: QubitLabel::Nv(unit),
            matrix: hadamard(),
        },
        GateOp::ArmSigmaZP { photon, arm } => LocalOperator::Conditioned {
            photon,
            arm,
            unit: None,
            factors: [[c(1.0), c(1.0)], [c(-1.0), c(-1.0)]],
        },
        GateOp::ConditionalScatter {
            photon,
            arm,
            unit,
            mode,
            refl,
        } => {
            let mut factors = [[c(0.0); 2]; 2];
            for (p, row) in factors.iter_mut().enumerate() {
                for (s, entry) in row.iter_mut().enumerate() {
                    *entry = scatter(
                        Polarization::from_bit(p as u8),
                        Spin::from_bit(s as u8),
                        mode,
                        &refl,
                    );
                }
            }
            LocalOperator::Conditioned {
                photon,
                arm,
                unit: Some(unit),
                factors,
            }
        }
    }
}

impl LocalOperator {
    fn is_diagonal(&self) -> bool {
        match self {
            LocalOperator::Single { matrix, .. } => matrix_is_diagonal(matrix),
            LocalOperator::Conditioned { .. } => true,
        }
    }

    /// Qubits a diagonal operator reads.
    fn support(&self) -> Vec<QubitLabel> {
        match *self {
            LocalOperator::Single { target, .. } => vec![target],
            LocalOperator::Conditioned {
                photon, arm, unit, ..
            } => {
                let mut labels = vec![QubitLabel::photon(photon, Dof::P)];
                labels.extend(
                    arm.dofs()
                        .into_iter()
                        .map(|d| QubitLabel::photon(photon, d)),
                );
                labels.extend(unit.map(QubitLabel::Nv));
                labels
            }
        }
    }

    /// Diagonal entry for the basis state described by `bit`.
    fn diagonal_entry(&self, bit: impl Fn(QubitLabel) -> u8) -> Complex64 {
        match *self {
            LocalOperator::Single { target, matrix } => {
                let b = bit(target) as usize;
                matrix[b][b]
            }
            LocalOperator::Conditioned {
                photon,
                arm,
                unit,
                factors,
            } => {
                if !arm.admits(|d| bit(QubitLabel::photon(photon, d))) {
                    return c(1.0);
                }
                let spin = unit.map_or(0, |u| bit(QubitLabel::Nv(u)));
                factors[bit(QubitLabel::photon(photon, Dof::P)) as usize][spin as usize]
            }
        }
    }
}

/// Applies a run of diagonal operators in one sweep.
fn apply_diagonal_run(state: &StateVector, ops: &[LocalOperator]) -> Result<StateVector> {
    let mut labels: Vec<QubitLabel> = ops.iter().flat_map(|op| op.support()).collect();
    labels.sort();
    labels.dedup();
    state.apply_diagonal(&labels, |bits| {
        let bit = |l: QubitLabel| labels.binary_search(&l).map_or(0, |k| bits[k]);
        ops.iter().map(|op| op.diagonal_entry(bit)).product()
    })
}

pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    match matrix_of(gate) {
        LocalOperator::Single { target, matrix } if !matrix_is_diagonal(&matrix) => {
            state.apply_single(target, &matrix)
        }
        op => apply_diagonal_run(state, &[op]),
    }
}

fn matrix_is_diagonal(m: &Matrix2) -> bool {
    m[0][1] == c(0.0) && m[1][0] == c(0.0)
}

/// Applies `gates` in order. Consecutive diagonal gates are fused into a
/// single pass over the amplitudes.
pub fn apply_all(state: &StateVector, gates: &[GateOp]) -> Result<StateVector> {
    let ops: Vec<LocalOperator> = gates.iter().map(matrix_of).collect();
    let mut s = state.clone();
    let mut i = 0;
    while i < ops.len() {
        let run = ops[i..].iter().take_while(|op| op.is_diagonal()).count();
        if run > 0 {
            s = apply_diagonal_run(&s, &ops[i..i + run])?;
            i += run;
        } else {
            s = apply_gate(&s, &gates[i])?;
            i += 1;
        }
    }
    Ok(s)
}

/// Scatters the photon's components selected by `arm` off `unit`.
pub fn scatter_photon_nv(
    state: &StateVector,
    photon: PhotonId,
    unit: NvUnit,
    arm: Arm,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<StateVector> {
    apply_gate(
        state,
        &GateOp::ConditionalScatter {
            photon,
            arm,
            unit,
            mode,
            refl: *refl,
        },
    )
}
