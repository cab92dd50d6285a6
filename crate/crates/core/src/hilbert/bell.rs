use std::fmt;

use num_complex::Complex64;

use super::label::{Dof, PhotonId, QubitLabel};
use super::state::{c, Matrix4, StateVector};
use crate::error::{argument, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// One of the four two-qubit Bell states. φ is even (|00⟩ ± |11⟩), ψ is odd
/// (|01⟩ ± |10⟩, first photon written first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellLabel {
    pub parity: Parity,
    pub sign: Sign,
}

impl BellLabel {
    pub const PHI_PLUS: BellLabel = BellLabel {
        parity: Parity::Even,
        sign: Sign::Plus,
    };
    pub const PHI_MINUS: BellLabel = BellLabel {
        parity: Parity::Even,
        sign: Sign::Minus,
    };
    pub const PSI_PLUS: BellLabel = BellLabel {
        parity: Parity::Odd,
        sign: Sign::Plus,
    };
    pub const PSI_MINUS: BellLabel = BellLabel {
        parity: Parity::Odd,
        sign: Sign::Minus,
    };
    pub const ALL: [BellLabel; 4] = [
        Self::PHI_PLUS,
        Self::PHI_MINUS,
        Self::PSI_PLUS,
        Self::PSI_MINUS,
    ];

    /// φ⁺ 0, φ⁻ 1, ψ⁺ 2, ψ⁻ 3.
    pub fn index(self) -> usize {
        self.parity.bit() as usize * 2 + matches!(self.sign, Sign::Minus) as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn name(self) -> &'static str {
        ["phi+", "phi-", "psi+", "psi-"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "phi+" | "φ+" | "φ⁺" => Some(Self::PHI_PLUS),
            "phi-" | "φ-" | "φ⁻" => Some(Self::PHI_MINUS),
            "psi+" | "ψ+" | "ψ⁺" => Some(Self::PSI_PLUS),
            "psi-" | "ψ-" | "ψ⁻" => Some(Self::PSI_MINUS),
            _ => None,
        }
    }

    /// Amplitudes over the local index `b1 + 2·b2`.
    pub fn vector(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = if self.sign == Sign::Plus { h } else { -h };
        match self.parity {
            Parity::Even => [c(h), c(0.0), c(0.0), c(s)],
            // |01⟩ has b1 = 0, b2 = 1: local index 2
            Parity::Odd => [c(0.0), c(s), c(h), c(0.0)],
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A product of one Bell state per DOF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperBellSpec {
    pub p: BellLabel,
    pub f: BellLabel,
    pub s: BellLabel,
    pub t: Option<BellLabel>,
}

impl HyperBellSpec {
    pub fn new(p: BellLabel, f: BellLabel, s: BellLabel) -> Self {
        Self { p, f, s, t: None }
    }

    pub fn with_t(self, t: BellLabel) -> Self {
        Self { t: Some(t), ..self }
    }

    pub fn uniform(label: BellLabel) -> Self {
        Self::new(label, label, label)
    }

    /// All 64 three-DOF specs, P index varying slowest.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(64);
        for p in BellLabel::ALL {
            for f in BellLabel::ALL {
                for s in BellLabel::ALL {
                    out.push(Self::new(p, f, s));
                }
            }
        }
        out
    }

    /// All 256 four-DOF specs.
    pub fn all_with_t() -> Vec<Self> {
        Self::all()
            .into_iter()
            .flat_map(|spec| BellLabel::ALL.into_iter().map(move |t| spec.with_t(t)))
            .collect()
    }

    pub fn dofs(&self) -> Vec<Dof> {
        if self.t.is_some() {
            Dof::ALL.to_vec()
        } else {
            Dof::PFS.to_vec()
        }
    }

    pub fn get(&self, dof: Dof) -> Option<BellLabel> {
        match dof {
            Dof::P => Some(self.p),
            Dof::F => Some(self.f),
            Dof::S => Some(self.s),
            Dof::T => self.t,
        }
    }

    pub fn set(mut self, dof: Dof, label: BellLabel) -> Self {
        match dof {
            Dof::P => self.p = label,
            Dof::F => self.f = label,
            Dof::S => self.s = label,
            Dof::T => self.t = Some(label),
        }
        self
    }

    fn from_indices(dofs: &[Dof], indices: &[usize]) -> Self {
        let mut spec = Self::uniform(BellLabel::PHI_PLUS);
        for (dof, i) in dofs.iter().zip(indices) {
            spec = spec.set(*dof, BellLabel::from_index(*i));
        }
        spec
    }
}

impl fmt::Display for HyperBellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^P {}^F {}^S", self.p, self.f, self.s)?;
        if let Some(t) = self.t {
            write!(f, " {t}^T")?;
        }
        Ok(())
    }
}

/// The normalized hyperentangled state `spec` shared by two photons, over
/// their P, F, S (and T) qubits.
pub fn make_hyper_bell(spec: HyperBellSpec, pair: (PhotonId, PhotonId)) -> Result<StateVector> {
    let (id1, id2) = pair;
    if id1 == id2 {
        return Err(argument(format!(
            "a Bell pair needs two distinct photons, got {id1} twice"
        )));
    }
    let mut state = StateVector::unit();
    for dof in spec.dofs() {
        let bell = spec.get(dof).expect("dof listed");
        let pair_state = StateVector::from_amplitudes(
            vec![QubitLabel::photon(id1, dof), QubitLabel::photon(id2, dof)],
            bell.vector().to_vec(),
        )?;
        state = state.tensor(&pair_state)?;
    }
    Ok(state)
}

/// Unitary sending Bell state `k` to the local computational index `k`.
pub fn bell_rotation() -> Matrix4 {
    let mut m = [[c(0.0); 4]; 4];
    for bell in BellLabel::ALL {
        let v = bell.vector();
        for (col, a) in v.iter().enumerate() {
            m[bell.index()][col] = a.conj();
        }
    }
    m
}

/// Bell-basis populations of the pair `(id1, id2)` over `dofs`, summed over
/// every other qubit in the register. Values are unnormalized (they sum to the
/// state's squared norm). Only nonzero entries are returned, in spec order.
pub fn bell_weights(
    state: &StateVector,
    pair: (PhotonId, PhotonId),
    dofs: &[Dof],
) -> Result<Vec<(HyperBellSpec, f64)>> {
    let rot = bell_rotation();
    let mut rotated = state.clone();
    let mut positions = Vec::with_capacity(dofs.len());
    for &dof in dofs {
        let (l1, l2) = (
            QubitLabel::photon(pair.0, dof),
            QubitLabel::photon(pair.1, dof),
        );
        rotated = rotated.apply_pair(l1, l2, &rot)?;
        positions.push((rotated.position(l1)?, rotated.position(l2)?));
    }
    let mut masses = vec![0.0; 1usize << (2 * dofs.len())];
    for (i, a) in rotated.amplitudes().iter().enumerate() {
        let key = positions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, (p1, p2))| {
                let local = ((i >> p1) & 1) + 2 * ((i >> p2) & 1);
                acc | (local << (2 * k))
            });
        masses[key] += a.norm_sqr();
    }
    Ok(masses
        .into_iter()
        .enumerate()
        .filter(|(_, m)| *m > 0.0)
        .map(|(key, m)| {
            let idx: Vec<usize> = (0..dofs.len()).map(|k| (key >> (2 * k)) & 3).collect();
            (HyperBellSpec::from_indices(dofs, &idx), m)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::state::fidelity;

    #[test]
    fn phi_plus_cube_has_eight_equal_entries() {
        let s = make_hyper_bell(
            HyperBellSpec::uniform(BellLabel::PHI_PLUS),
            (PhotonId::A, PhotonId::B),
        )
        .unwrap();
        let nonzero: Vec<_> = s.amplitudes().iter().filter(|a| a.norm() > 1e-15).collect();
        assert_eq!(nonzero.len(), 8);
        let expected = 1.0 / (2.0 * 2f64.sqrt());
        for a in nonzero {
            assert!((a.re - expected).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn psi_plus_has_expected_support() {
        let spec = HyperBellSpec::new(
            BellLabel::PSI_MINUS,
            BellLabel::PHI_PLUS,
            BellLabel::PHI_PLUS,
        );
        let s = make_hyper_bell(spec, (PhotonId::A, PhotonId::B)).unwrap();
        use Dof::*;
        let amp = |ap, bp| {
            s.amplitude(&[
                (QubitLabel::photon(PhotonId::A, P), ap),
                (QubitLabel::photon(PhotonId::A, F), 0),
                (QubitLabel::photon(PhotonId::A, S), 0),
                (QubitLabel::photon(PhotonId::B, P), bp),
                (QubitLabel::photon(PhotonId::B, F), 0),
                (QubitLabel::photon(PhotonId::B, S), 0),
            ])
            .unwrap()
        };
        // (|RL⟩ − |LR⟩)/√2 with A written first
        assert!(amp(0, 1).re > 0.0);
        assert!(amp(1, 0).re < 0.0);
        assert_eq!(amp(0, 0), c(0.0));
    }

    #[test]
    fn duplicate_photons_rejected() {
        assert!(make_hyper_bell(
            HyperBellSpec::uniform(BellLabel::PHI_PLUS),
            (PhotonId::A, PhotonId::A)
        )
        .is_err());
    }

    #[test]
    fn all_specs_orthonormal() {
        let states: Vec<_> = HyperBellSpec::all()
            .into_iter()
            .map(|s| make_hyper_bell(s, (PhotonId::A, PhotonId::B)).unwrap())
            .collect();
        for (i, a) in states.iter().enumerate() {
            assert!((a.norm_sqr() - 1.0).abs() < 1e-14);
            for b in &states[i + 1..] {
                assert!(a.inner(b).unwrap().norm() < 1e-14);
            }
        }
    }

    #[test]
    fn bell_weights_identify_each_spec() {
        for spec in HyperBellSpec::all() {
            let s = make_hyper_bell(spec, (PhotonId::C, PhotonId::D)).unwrap();
            let w = bell_weights(&s, (PhotonId::C, PhotonId::D), &Dof::PFS).unwrap();
            let top = w.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
            assert_eq!(top.0, spec);
            assert!((top.1 - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn four_dof_specs_have_256_amplitudes() {
        let spec = HyperBellSpec::uniform(BellLabel::PSI_PLUS).with_t(BellLabel::PHI_MINUS);
        let s = make_hyper_bell(spec, (PhotonId::A, PhotonId::B)).unwrap();
        assert_eq!(s.amplitudes().len(), 256);
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-15);
    }
}
