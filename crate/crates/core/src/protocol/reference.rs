//! Published reference values for the first step, kept verbatim so they can
//! be compared with first-principles derivations. A few printed entries
//! disagree with the parity bookkeeping; these are reported, not matched.

use std::fmt;

use super::case::{CaseId, DofPattern};
use crate::hilbert::{BellLabel, Dof, Parity};

/// A symbolic case-table entry in terms of one DOF's fidelity F.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellExpr {
    /// F²
    FSquared,
    /// (1 − F)²
    OneMinusFSquared,
    /// F(1 − F)
    FOneMinusF,
}

impl CellExpr {
    pub fn eval(self, f: f64) -> f64 {
        match self {
            CellExpr::FSquared => f * f,
            CellExpr::OneMinusFSquared => (1.0 - f) * (1.0 - f),
            CellExpr::FOneMinusF => f * (1.0 - f),
        }
    }
}

impl fmt::Display for CellExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellExpr::FSquared => "F^2",
            CellExpr::OneMinusFSquared => "(1-F)^2",
            CellExpr::FOneMinusF => "F(1-F)",
        })
    }
}

/// (AB in φ⁺, AB in ψ⁺) entries of one case and DOF.
pub type TableCell = (CellExpr, CellExpr);

use CellExpr::{FOneMinusF as X, FSquared as Q, OneMinusFSquared as M};

const PRINTED_TABLE: [[TableCell; 3]; 8] = [
    [(Q, M), (Q, M), (Q, M)],
    [(X, X), (X, X), (X, X)],
    [(X, X), (Q, M), (M, M)],
    [(Q, M), (X, X), (Q, M)],
    [(Q, M), (Q, M), (X, X)],
    [(X, X), (X, X), (Q, M)],
    [(X, X), (Q, M), (X, X)],
    [(Q, M), (X, X), (X, X)],
];

pub fn printed_table_cell(case: CaseId, dof: Dof) -> TableCell {
    PRINTED_TABLE[case.index()][dof.index().min(2)]
}

/// Entry implied by the case's same/different pattern in `dof`.
pub fn derived_table_cell(case: CaseId, dof: Dof) -> TableCell {
    match case.pattern(dof) {
        DofPattern::Same => (Q, M),
        DofPattern::Different => (X, X),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableDiscrepancy {
    pub case: CaseId,
    pub dof: Dof,
    pub printed: TableCell,
    pub derived: TableCell,
}

impl fmt::Display for TableDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case table, {} {}: printed ({}, {}), derived ({}, {})",
            self.case, self.dof, self.printed.0, self.printed.1, self.derived.0, self.derived.1
        )
    }
}

pub fn table_discrepancies() -> Vec<TableDiscrepancy> {
    CaseId::all()
        .into_iter()
        .flat_map(|case| Dof::PFS.map(|dof| (case, dof)))
        .filter_map(|(case, dof)| {
            let (printed, derived) = (printed_table_cell(case, dof), derived_table_cell(case, dof));
            (printed != derived).then_some(TableDiscrepancy {
                case,
                dof,
                printed,
                derived,
            })
        })
        .collect()
}

/// Parities found on AC and on BD.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KetGroup {
    pub ac: Parity,
    pub bd: Parity,
}

impl KetGroup {
    pub const ALL: [KetGroup; 4] = [
        KetGroup {
            ac: Parity::Even,
            bd: Parity::Even,
        },
        KetGroup {
            ac: Parity::Odd,
            bd: Parity::Odd,
        },
        KetGroup {
            ac: Parity::Even,
            bd: Parity::Odd,
        },
        KetGroup {
            ac: Parity::Odd,
            bd: Parity::Even,
        },
    ];

    fn index(self) -> usize {
        Self::ALL
            .iter()
            .position(|g| *g == self)
            .expect("four groups")
    }
}

impl fmt::Display for KetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AC {} / BD {}", self.ac.name(), self.bd.name())
    }
}

/// Printed ABCD kets per group, DOF and AB state (φ⁺ first, ψ⁺ second),
/// exactly as typeset.
const PRINTED_KETS: [[[(&str, &str); 2]; 3]; 4] = [
    [
        [("RRRR", "LLLL"), ("RLRL", "LRLR")],
        [("rrrr", "llll"), ("rlrl", "lr lr")],
        [("EEEE", "IIII"), ("EIEI", "IEIE")],
    ],
    [
        [("RRLL", "LLRR"), ("RLLR", "LRRL")],
        [("rrll", "llrr"), ("rllr", "lrll")],
        [("EEII", "IIIE"), ("EIII", "IEEI")],
    ],
    [
        [("RRRL", "LLLL"), ("RLRR", "LRLL")],
        [("rrrl", "lllr"), ("rlrr", "lrll")],
        [("EEEE", "IIIE"), ("EIEE", "IEII")],
    ],
    [
        [("RRLR", "LLRL"), ("RLLL", "LRRR")],
        [("rrlr", "llrl"), ("rlll", "lrrr")],
        [("EEIE", "IIIE"), ("EIII", "IEEE")],
    ],
];

fn ab_index(ab: BellLabel) -> usize {
    usize::from(ab.parity == Parity::Odd)
}

pub fn printed_kets(group: KetGroup, dof: Dof, ab: BellLabel) -> (&'static str, &'static str) {
    PRINTED_KETS[group.index()][dof.index().min(2)][ab_index(ab)]
}

/// The two ABCD basis kets compatible with AB's parity and the observed
/// AC and BD parities, A's bit 0 first.
pub fn derived_kets(group: KetGroup, dof: Dof, ab: BellLabel) -> (String, String) {
    let sym = dof.symbols();
    let ket = |a: u8| {
        let b = a ^ ab.parity.bit();
        let c = a ^ group.ac.bit();
        let d = b ^ group.bd.bit();
        [a, b, c, d]
            .iter()
            .map(|x| sym[*x as usize])
            .collect::<String>()
    };
    (ket(0), ket(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KetDiscrepancy {
    pub group: KetGroup,
    pub dof: Dof,
    pub ab: BellLabel,
    pub printed: (String, String),
    pub derived: (String, String),
}

impl fmt::Display for KetDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kets for {}, {} with AB {}: printed |{}> + |{}>, derived |{}> + |{}>",
            self.group,
            self.dof,
            self.ab,
            self.printed.0,
            self.printed.1,
            self.derived.0,
            self.derived.1
        )
    }
}

fn same_pair(printed: (&str, &str), derived: &(String, String)) -> bool {
    let clean = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    let mut p = [clean(printed.0), clean(printed.1)];
    let mut d = [derived.0.clone(), derived.1.clone()];
    p.sort();
    d.sort();
    p == d
}

pub fn ket_discrepancies() -> Vec<KetDiscrepancy> {
    let mut out = Vec::new();
    for group in KetGroup::ALL {
        for dof in Dof::PFS {
            for ab in [BellLabel::PHI_PLUS, BellLabel::PSI_PLUS] {
                let printed = printed_kets(group, dof, ab);
                let derived = derived_kets(group, dof, ab);
                if !same_pair(printed, &derived) {
                    out.push(KetDiscrepancy {
                        group,
                        dof,
                        ab,
                        printed: (printed.0.to_string(), printed.1.to_string()),
                        derived,
                    });
                }
            }
        }
    }
    out
}
