use std::fmt;

use crate::error::{argument, Result};
use crate::hilbert::{Dof, Parity};

/// Whether the two pairs showed the same parity in one DOF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DofPattern {
    Same,
    Different,
}

impl DofPattern {
    pub fn of(ac: Parity, bd: Parity) -> Self {
        if ac == bd {
            DofPattern::Same
        } else {
            DofPattern::Different
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Probability of this pattern in one DOF of two independent bit-flip
    /// pairs with fidelity `f`.
    pub fn probability(self, f: f64) -> f64 {
        match self {
            DofPattern::Same => f * f + (1.0 - f) * (1.0 - f),
            DofPattern::Different => 2.0 * f * (1.0 - f),
        }
    }
}

use DofPattern::{Different as D, Same as S};

const PATTERNS: [[DofPattern; 3]; 8] = [
    [S, S, S],
    [D, D, D],
    [D, S, S],
    [S, D, S],
    [S, S, D],
    [D, D, S],
    [D, S, D],
    [S, D, D],
];

/// One of the eight same/different patterns over (P, F, S).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseId(u8);

impl CaseId {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=8).contains(&id) {
            Ok(Self(id))
        } else {
            Err(argument(format!("case ids run from 1 to 8, got {id}")))
        }
    }

    pub fn all() -> [CaseId; 8] {
        std::array::from_fn(|i| CaseId(i as u8 + 1))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// Patterns in P, F, S order.
    pub fn patterns(self) -> [DofPattern; 3] {
        PATTERNS[self.index()]
    }

    pub fn pattern(self, dof: Dof) -> DofPattern {
        self.patterns()[dof.index().min(2)]
    }

    pub fn from_patterns(p: [DofPattern; 3]) -> Self {
        let i = PATTERNS
            .iter()
            .position(|x| *x == p)
            .expect("eight patterns cover all combinations");
        CaseId(i as u8 + 1)
    }

    /// The case whose Same/Different pattern is the complement, if this case
    /// goes to the SWAP step.
    pub fn partner(self) -> Option<CaseId> {
        match self.0 {
            3..=8 => {
                let flipped = self.patterns().map(|p| if p == S { D } else { S });
                Some(Self::from_patterns(flipped))
            }
            _ => None,
        }
    }

    /// First-principles probability of this case for bit-flip pairs.
    pub fn probability(self, fs: [f64; 3]) -> f64 {
        self.patterns()
            .iter()
            .zip(fs)
            .map(|(p, f)| p.probability(f))
            .product()
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.0)
    }
}

/// Case from the (P, F, S) parities observed on AC and on BD.
pub fn classify(ac: [Parity; 3], bd: [Parity; 3]) -> CaseId {
    CaseId::from_patterns(std::array::from_fn(|k| DofPattern::of(ac[k], bd[k])))
}
