use crate::analytics::Table;
use crate::cavity::{InteractionMode, ReflectionPair};
use crate::error::Result;
use crate::hilbert::{BellLabel, Dof, MixedEnsemble};

use super::case::CaseId;
use super::step1::{Step1Cache, Step1Result};
use super::step2::{step2_mixed, step2_plan};

/// Joint step-2 terms lighter than this are skipped in realistic mode, where
/// the posteriors carry many tiny error terms.
pub const REALISTIC_STEP2_FLOOR: f64 = 1e-6;

/// One matched pair of complementary cases.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    /// Case of AB (the lower id) and of A′B′.
    pub cases: (CaseId, CaseId),
    /// Fraction of groups that find a partner: the smaller case probability.
    pub matched: f64,
    /// Probability that the second step loses no photon.
    pub survival: f64,
    /// AB after the second step; `None` when neither case occurs.
    pub output: Option<MixedEnsemble>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundReport {
    pub round: usize,
    pub input_fidelities: [f64; 3],
    pub step1: Step1Result,
    /// Per-DOF φ⁺ probabilities of the pairs kept in case 1.
    pub fidelities: [f64; 3],
    /// Product of the three.
    pub fidelity: f64,
    pub y1: f64,
    pub y2: f64,
    pub kept: f64,
    pub discarded: f64,
    pub step2_consumed: f64,
    /// Probability that a photon was absorbed during the first step.
    pub lost: f64,
    pub pairs: Vec<PairReport>,
}

impl RoundReport {
    pub fn case_probabilities(&self) -> [f64; 8] {
        self.step1.probabilities()
    }

    /// Joint probabilities of `case` with AB in φ⁺ and in ψ⁺ for one DOF.
    pub fn table_cell(&self, case: CaseId, dof: Dof) -> (f64, f64) {
        let rec = self.step1.case(case);
        (
            rec.dof_probability(dof, BellLabel::PHI_PLUS),
            rec.dof_probability(dof, BellLabel::PSI_PLUS),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EppReport {
    pub mode: InteractionMode,
    pub refl: ReflectionPair,
    pub initial: [f64; 3],
    pub rounds: Vec<RoundReport>,
}

impl EppReport {
    pub fn rounds_executed(&self) -> usize {
        self.rounds.len()
    }

    pub fn final_fidelities(&self) -> [f64; 3] {
        self.rounds.last().map_or(self.initial, |r| r.fidelities)
    }

    pub fn final_fidelity(&self) -> f64 {
        self.final_fidelities().iter().product()
    }

    /// One row per round, preceded by the input as round 0.
    pub fn table(&self) -> Table {
        let mut columns: Vec<String> = ["round", "F1", "F2", "F3", "F", "Y1", "Y2"]
            .map(String::from)
            .to_vec();
        columns.extend((1..=8).map(|k| format!("P_case{k}")));
        let mut table = Table::new(columns);
        let [f1, f2, f3] = self.initial;
        let mut first = vec![0.0, f1, f2, f3, f1 * f2 * f3, 1.0, 1.0];
        first.extend([f64::NAN; 8]);
        table.rows.push(first);
        for r in &self.rounds {
            let mut row = vec![r.round as f64];
            row.extend(r.fidelities);
            row.extend([r.fidelity, r.y1, r.y2]);
            row.extend(r.case_probabilities());
            table.rows.push(row);
        }
        table
    }
}

fn run_round(
    round: usize,
    fs: [f64; 3],
    cache: &mut Step1Cache,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<RoundReport> {
    let ensemble = MixedEnsemble::canonical(fs[0], fs[1], fs[2])?;
    let s1 = cache.step1(&ensemble, &ensemble)?;
    let p = s1.probabilities();
    let floor = match mode {
        InteractionMode::Ideal => 0.0,
        InteractionMode::Realistic => REALISTIC_STEP2_FLOOR,
    };
    let mut pairs = Vec::with_capacity(3);
    for own in [3u8, 4, 5] {
        let a = CaseId::new(own)?;
        let plan = step2_plan(a)?;
        let b = plan.partner_case;
        let matched = p[a.index()].min(p[b.index()]);
        let (output, survival) = match (&s1.case(a).posterior, &s1.case(b).posterior) {
            (Some(pa), Some(pb)) if matched > 0.0 => {
                let (out, s) = step2_mixed(&plan, pa, pb, mode, refl, floor)?;
                (Some(out), s)
            }
            _ => (None, 0.0),
        };
        pairs.push(PairReport {
            cases: (a, b),
            matched,
            survival,
            output,
        });
    }
    let fidelities = s1.cases[0]
        .posterior
        .as_ref()
        .map_or([0.0; 3], |e| e.dof_fidelities());
    let kept = p[0];
    Ok(RoundReport {
        round,
        input_fidelities: fs,
        fidelities,
        fidelity: fidelities.iter().product(),
        y1: kept,
        y2: kept + pairs.iter().map(|x| x.matched * x.survival).sum::<f64>(),
        kept,
        discarded: p[1],
        step2_consumed: p[2..].iter().sum(),
        lost: 1.0 - s1.survival,
        pairs,
        step1: s1,
    })
}

/// Runs `rounds` rounds of the two-step protocol starting from the bit-flip
/// ensemble (f1, f2, f3). Each round restarts from the canonical ensemble
/// built from the previous round's per-DOF fidelities.
pub fn run_epp(
    f1: f64,
    f2: f64,
    f3: f64,
    rounds: usize,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<EppReport> {
    MixedEnsemble::canonical(f1, f2, f3)?;
    let mut fs = [f1, f2, f3];
    let mut out = Vec::with_capacity(rounds);
    let mut cache = Step1Cache::new(mode, refl);
    for round in 1..=rounds {
        let r = run_round(round, fs, &mut cache, mode, refl)?;
        fs = r.fidelities;
        out.push(r);
    }
    Ok(EppReport {
        mode,
        refl: *refl,
        initial: [f1, f2, f3],
        rounds: out,
    })
}
