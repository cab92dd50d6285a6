//! Second step: a pair AB left in one of cases 3–8 is combined with a pair
//! A′B′ from the complementary case, and a sequence of SWAPs moves the
//! DOFs that agree with the partner's good DOFs into AB.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::case::CaseId;
use crate::cavity::{InteractionMode, ReflectionPair, Spin};
use crate::circuits::{pf_swap, pp_swap_evolve, pp_swap_project, ps_swap, pt_swap};
use crate::error::{argument, domain, Result};
use crate::hilbert::{
    bell_weights, make_hyper_bell, Dof, HyperBellSpec, MixedEnsemble, NvUnit, PhotonId, QubitLabel,
    StateVector,
};

/// NV units used by the two polarization SWAPs of a [`SwapStage::PP`] stage.
pub const PP_UNITS: [NvUnit; 2] = [NvUnit(10), NvUnit(11)];

/// Branches whose squared norms fall below this are dropped.
const BRANCH_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapStage {
    /// Polarization SWAPs A↔A′ and B↔B′.
    PP,
    /// Local P↔F swap on each of A, B, A′, B′.
    PF,
    /// Local P↔S swap on each photon.
    PS,
    /// Local P↔T swap on each photon.
    PT,
}

impl SwapStage {
    pub fn name(self) -> &'static str {
        match self {
            SwapStage::PP => "P-P",
            SwapStage::PF => "P-F",
            SwapStage::PS => "P-S",
            SwapStage::PT => "P-T",
        }
    }
}

impl fmt::Display for SwapStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step2Plan {
    /// Case of the AB pair.
    pub own_case: CaseId,
    /// Case of the A′B′ pair.
    pub partner_case: CaseId,
    pub sequence: Vec<SwapStage>,
}

impl fmt::Display for Step2Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<&str> = self.sequence.iter().map(|s| s.name()).collect();
        write!(
            f,
            "{} with {}: {}",
            self.own_case,
            self.partner_case,
            seq.join(", ")
        )
    }
}

pub fn step2_plan(case: CaseId) -> Result<Step2Plan> {
    use SwapStage::*;
    let sequence = match case.id() {
        1 => return Err(domain("case 1 pairs are kept without a second step")),
        2 => return Err(domain("case 2 pairs are discarded")),
        3 => vec![PP],
        4 => vec![PF, PP, PF],
        5 => vec![PS, PP, PS],
        6 => vec![PP, PF, PP, PF],
        7 => vec![PP, PS, PP, PS],
        _ => vec![PF, PP, PF, PS, PP, PS],
    };
    let partner_case = case.partner().expect("cases 3-8 have partners");
    Ok(Step2Plan {
        own_case: case,
        partner_case,
        sequence,
    })
}

/// Result of running a plan: one unnormalized photonic state per NV
/// measurement history. Histories leading to the same state (always the
/// case in the ideal limit) are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct Step2Outcome {
    pub branches: Vec<StateVector>,
    /// Probability that every photon survived.
    pub survival: f64,
}

impl Step2Outcome {
    fn weights(&self, pair: (PhotonId, PhotonId)) -> Result<Vec<(HyperBellSpec, f64)>> {
        let mut acc: BTreeMap<HyperBellSpec, f64> = BTreeMap::new();
        for b in &self.branches {
            for (spec, m) in bell_weights(b, pair, &Dof::PFS)? {
                *acc.entry(spec).or_default() += m / self.survival;
            }
        }
        Ok(acc.into_iter().collect())
    }

    /// Normalized Bell populations of AB.
    pub fn ab_weights(&self) -> Result<Vec<(HyperBellSpec, f64)>> {
        self.weights((PhotonId::A, PhotonId::B))
    }

    /// Normalized Bell populations of A′B′.
    pub fn a2b2_weights(&self) -> Result<Vec<(HyperBellSpec, f64)>> {
        self.weights((PhotonId::APrime, PhotonId::BPrime))
    }

    /// The AB and A′B′ hyperentangled Bell states, if each pair ends in a
    /// single one up to `tol` in probability.
    pub fn product_specs(&self, tol: f64) -> Result<Option<(HyperBellSpec, HyperBellSpec)>> {
        let top = |w: Vec<(HyperBellSpec, f64)>| {
            w.into_iter().find(|(_, m)| *m >= 1.0 - tol).map(|(s, _)| s)
        };
        Ok(top(self.ab_weights()?).zip(top(self.a2b2_weights()?)))
    }
}

fn check_register(
    state: &StateVector,
    allowed: [PhotonId; 2],
    dofs: &[Dof],
    what: &str,
) -> Result<()> {
    let ok = state
        .labels()
        .iter()
        .all(|l| matches!(l, QubitLabel::Photon(p, _) if allowed.contains(p)))
        && allowed.iter().all(|p| {
            dofs.iter()
                .all(|d| state.contains(QubitLabel::photon(*p, *d)))
        });
    if ok {
        Ok(())
    } else {
        Err(argument(format!(
            "{what} must hold exactly the DOF qubits of photons {} and {}",
            allowed[0], allowed[1]
        )))
    }
}

fn merge_into(branches: &mut Vec<StateVector>, s: StateVector) -> Result<()> {
    let ns = s.norm_sqr();
    if ns < BRANCH_FLOOR {
        return Ok(());
    }
    for b in branches.iter_mut() {
        let nb = b.norm_sqr();
        if (b.inner(&s)?.norm_sqr() - nb * ns).abs() <= 1e-12 * nb * ns {
            *b = b.scaled(((nb + ns) / nb).sqrt().into());
            return Ok(());
        }
    }
    branches.push(s);
    Ok(())
}

fn apply_stage(
    branches: Vec<StateVector>,
    stage: SwapStage,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Vec<StateVector>> {
    let photons = [PhotonId::A, PhotonId::B, PhotonId::APrime, PhotonId::BPrime];
    let local = |s: &StateVector, f: fn(&StateVector, PhotonId) -> Result<StateVector>| {
        photons.iter().try_fold(s.clone(), |acc, p| f(&acc, *p))
    };
    match stage {
        SwapStage::PF => branches.iter().map(|b| local(b, pf_swap)).collect(),
        SwapStage::PS => branches.iter().map(|b| local(b, ps_swap)).collect(),
        SwapStage::PT => branches.iter().map(|b| local(b, pt_swap)).collect(),
        SwapStage::PP => {
            let mut current = branches;
            for ((p1, p2), unit) in [
                (PhotonId::A, PhotonId::APrime),
                (PhotonId::B, PhotonId::BPrime),
            ]
            .into_iter()
            .zip(PP_UNITS)
            {
                let mut next = Vec::with_capacity(current.len() * 2);
                for b in &current {
                    let evolved = pp_swap_evolve(b, p1, p2, unit, mode, refl)?;
                    for spin in [Spin::Plus, Spin::Minus] {
                        merge_into(&mut next, pp_swap_project(&evolved, p1, p2, unit, spin)?.0)?;
                    }
                }
                current = next;
            }
            Ok(current)
        }
    }
}

/// Runs a plan on AB (photons A, B) and A′B′ (photons A′, B′).
pub fn step2_execute(
    plan: &Step2Plan,
    ab: &StateVector,
    a2b2: &StateVector,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Step2Outcome> {
    let mut dofs = Dof::PFS.to_vec();
    if plan.sequence.contains(&SwapStage::PT) {
        dofs.push(Dof::T);
    }
    check_register(ab, [PhotonId::A, PhotonId::B], &dofs, "the AB state")?;
    check_register(
        a2b2,
        [PhotonId::APrime, PhotonId::BPrime],
        &dofs,
        "the A'B' state",
    )?;
    let input = ab.tensor(a2b2)?;
    let norm = input.norm_sqr();
    if norm <= 0.0 {
        return Err(domain("step-2 input has zero norm"));
    }
    let mut branches = vec![input];
    for stage in &plan.sequence {
        branches = apply_stage(branches, *stage, mode, refl)?;
    }
    let survival = branches.iter().map(|b| b.norm_sqr()).sum::<f64>() / norm;
    if survival <= 0.0 {
        return Err(domain("every photon was absorbed during the second step"));
    }
    let branches = branches
        .into_iter()
        .map(|b| b.scaled((1.0 / norm.sqrt()).into()))
        .collect();
    Ok(Step2Outcome { branches, survival })
}

/// Runs a plan over every joint term of the two posterior ensembles whose
/// weight is at least `floor`. Returns the AB output ensemble and the
/// weighted survival probability.
pub fn step2_mixed(
    plan: &Step2Plan,
    ab: &MixedEnsemble,
    a2b2: &MixedEnsemble,
    mode: InteractionMode,
    refl: &ReflectionPair,
    floor: f64,
) -> Result<(MixedEnsemble, f64)> {
    let joint: Vec<(f64, HyperBellSpec, HyperBellSpec)> = ab
        .terms()
        .iter()
        .flat_map(|(wa, a)| a2b2.terms().iter().map(move |(wb, b)| (wa * wb, *a, *b)))
        .filter(|(w, _, _)| *w >= floor)
        .collect();
    let considered: f64 = joint.iter().map(|(w, _, _)| w).sum();
    if considered <= 0.0 {
        return Err(domain("no joint step-2 term reaches the weight floor"));
    }
    let results = joint
        .par_iter()
        .map(|(w, a, b)| {
            let sa = make_hyper_bell(*a, (PhotonId::A, PhotonId::B))?;
            let sb = make_hyper_bell(*b, (PhotonId::APrime, PhotonId::BPrime))?;
            let out = step2_execute(plan, &sa, &sb, mode, refl)?;
            Ok((*w, out.survival, out.ab_weights()?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut survival = 0.0;
    let mut masses = Vec::new();
    for (w, s, weights) in results {
        survival += w * s / considered;
        masses.extend(weights.into_iter().map(|(spec, m)| (w * s * m, spec)));
    }
    Ok((MixedEnsemble::from_masses(masses)?, survival))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::BellLabel;

    const PHI: BellLabel = BellLabel::PHI_PLUS;
    const PSI: BellLabel = BellLabel::PSI_PLUS;

    fn run(plan: &Step2Plan, a: HyperBellSpec, b: HyperBellSpec) -> Step2Outcome {
        let sa = make_hyper_bell(a, (PhotonId::A, PhotonId::B)).unwrap();
        let sb = make_hyper_bell(b, (PhotonId::APrime, PhotonId::BPrime)).unwrap();
        step2_execute(
            plan,
            &sa,
            &sb,
            InteractionMode::Ideal,
            &ReflectionPair::ideal(),
        )
        .unwrap()
    }

    #[test]
    fn plans_and_partners() {
        assert!(step2_plan(CaseId::new(1).unwrap()).is_err());
        assert!(step2_plan(CaseId::new(2).unwrap()).is_err());
        let p8 = step2_plan(CaseId::new(8).unwrap()).unwrap();
        assert_eq!(p8.partner_case.id(), 3);
        assert_eq!(p8.sequence.len(), 6);
        assert_eq!(
            p8.to_string(),
            "case 8 with case 3: P-F, P-P, P-F, P-S, P-P, P-S"
        );
    }

    #[test]
    fn case_six_intermediate_and_final() {
        let a = HyperBellSpec::new(PSI, PHI, PHI);
        let b = HyperBellSpec::new(PHI, PSI, PSI);
        let plan = step2_plan(CaseId::new(6).unwrap()).unwrap();
        let first = Step2Plan {
            sequence: plan.sequence[..1].to_vec(),
            ..plan.clone()
        };
        let mid = run(&first, a, b);
        assert_eq!(
            mid.product_specs(1e-12).unwrap(),
            Some((HyperBellSpec::uniform(PHI), HyperBellSpec::uniform(PSI)))
        );
        let out = run(&plan, a, b);
        assert_eq!(out.branches.len(), 1);
        assert_eq!(
            out.product_specs(1e-12).unwrap(),
            Some((
                HyperBellSpec::new(PHI, PSI, PHI),
                HyperBellSpec::new(PSI, PHI, PSI)
            ))
        );
    }

    #[test]
    fn register_mismatch_is_rejected() {
        let plan = step2_plan(CaseId::new(3).unwrap()).unwrap();
        let sa = make_hyper_bell(HyperBellSpec::uniform(PHI), (PhotonId::A, PhotonId::B)).unwrap();
        let wrong =
            make_hyper_bell(HyperBellSpec::uniform(PHI), (PhotonId::C, PhotonId::D)).unwrap();
        let refl = ReflectionPair::ideal();
        assert!(step2_execute(&plan, &sa, &wrong, InteractionMode::Ideal, &refl).is_err());
        let pt = Step2Plan {
            sequence: vec![SwapStage::PT],
            ..plan
        };
        let sb = make_hyper_bell(
            HyperBellSpec::uniform(PHI),
            (PhotonId::APrime, PhotonId::BPrime),
        )
        .unwrap();
        assert!(step2_execute(&pt, &sa, &sb, InteractionMode::Ideal, &refl).is_err());
    }
}
