use std::fmt;

/// Photon identifiers. The derived order is the canonical register order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhotonId {
    A,
    B,
    C,
    D,
    APrime,
    BPrime,
    CPrime,
    DPrime,
}

impl PhotonId {
    pub const ALL: [PhotonId; 8] = [
        PhotonId::A,
        PhotonId::B,
        PhotonId::C,
        PhotonId::D,
        PhotonId::APrime,
        PhotonId::BPrime,
        PhotonId::CPrime,
        PhotonId::DPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PhotonId::A => "A",
            PhotonId::B => "B",
            PhotonId::C => "C",
            PhotonId::D => "D",
            PhotonId::APrime => "A'",
            PhotonId::BPrime => "B'",
            PhotonId::CPrime => "C'",
            PhotonId::DPrime => "D'",
        }
    }
}

impl fmt::Display for PhotonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Photonic degree of freedom: polarization and three longitudinal-momentum
/// (spatial) modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dof {
    P,
    F,
    S,
    T,
}

impl Dof {
    /// The three DOFs carried by the purified pairs.
    pub const PFS: [Dof; 3] = [Dof::P, Dof::F, Dof::S];
    pub const ALL: [Dof; 4] = [Dof::P, Dof::F, Dof::S, Dof::T];

    /// Basis-state symbols for bit values 0 and 1.
    pub fn symbols(self) -> [char; 2] {
        match self {
            Dof::P => ['R', 'L'],
            Dof::F => ['r', 'l'],
            Dof::S => ['E', 'I'],
            Dof::T => ['u', 'd'],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dof::P => "P",
            Dof::F => "F",
            Dof::S => "S",
            Dof::T => "T",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifier of one NV-cavity unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NvUnit(pub u8);

impl fmt::Display for NvUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NV{}", self.0)
    }
}

/// One qubit of a register. Photon qubits sort before NV spins, photons by
/// id, then DOFs in P, F, S, T order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QubitLabel {
    Photon(PhotonId, Dof),
    Nv(NvUnit),
}

impl QubitLabel {
    pub fn photon(id: PhotonId, dof: Dof) -> Self {
        QubitLabel::Photon(id, dof)
    }

    pub fn nv(unit: u8) -> Self {
        QubitLabel::Nv(NvUnit(unit))
    }

    /// Symbol of the given basis bit (R/L, r/l, E/I, u/d, +/-).
    pub fn symbol(self, bit: u8) -> char {
        match self {
            QubitLabel::Photon(_, dof) => dof.symbols()[bit as usize & 1],
            QubitLabel::Nv(_) => {
                if bit == 0 {
                    '+'
                } else {
                    '-'
                }
            }
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitLabel::Photon(id, dof) => write!(f, "{id}.{dof}"),
            QubitLabel::Nv(unit) => write!(f, "{unit}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_puts_photons_first_then_dofs() {
        let mut labels = vec![
            QubitLabel::nv(0),
            QubitLabel::photon(PhotonId::B, Dof::P),
            QubitLabel::photon(PhotonId::A, Dof::S),
            QubitLabel::photon(PhotonId::APrime, Dof::P),
            QubitLabel::photon(PhotonId::A, Dof::P),
        ];
        labels.sort();
        assert_eq!(
            labels,
            vec![
                QubitLabel::photon(PhotonId::A, Dof::P),
                QubitLabel::photon(PhotonId::A, Dof::S),
                QubitLabel::photon(PhotonId::B, Dof::P),
                QubitLabel::photon(PhotonId::APrime, Dof::P),
                QubitLabel::nv(0),
            ]
        );
    }

    #[test]
    fn symbols_follow_bit_convention() {
        assert_eq!(QubitLabel::photon(PhotonId::A, Dof::P).symbol(1), 'L');
        assert_eq!(QubitLabel::photon(PhotonId::A, Dof::S).symbol(0), 'E');
        assert_eq!(QubitLabel::photon(PhotonId::A, Dof::T).symbol(1), 'd');
        assert_eq!(QubitLabel::nv(2).symbol(1), '-');
        assert_eq!(
            QubitLabel::photon(PhotonId::CPrime, Dof::F).to_string(),
            "C'.F"
        );
    }
}
