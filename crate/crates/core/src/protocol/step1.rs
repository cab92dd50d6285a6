//! First step: parity comparison of AC and BD, classification, and
//! detection of C and D.
//!
//! Every joint term of the two input ensembles is simulated as a 12-qubit
//! pure state. The σ_z feed-forward on B depends only on computational-basis
//! detection results, so it is applied as a controlled phase before the
//! detectors; summing the AB Bell populations over the undetected C, D
//! qubits then equals summing over every detection pattern.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::case::{classify, CaseId};
use crate::cavity::{InteractionMode, ReflectionPair};
use crate::circuits::{p_qnd_evolve, project_parities, s_qnd_evolve};
use crate::error::{argument, Result};
use crate::hilbert::{
    bell_weights, make_hyper_bell, BellLabel, Dof, HyperBellSpec, MixedEnsemble, NvUnit, Parity,
    PhotonId, QubitLabel, StateVector,
};
use crate::optics::{apply_all, GateOp};

/// NV units used by Alice (on A, C) and Bob (on B, D).
pub const ALICE_UNITS: [NvUnit; 3] = [NvUnit(0), NvUnit(1), NvUnit(2)];
pub const BOB_UNITS: [NvUnit; 3] = [NvUnit(3), NvUnit(4), NvUnit(5)];

/// Bell populations below this are numerical noise.
const MASS_FLOOR: f64 = 1e-28;

/// Outcome statistics of one case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRecord {
    pub case: CaseId,
    /// Probability of the case relative to the input (losses included).
    pub probability: f64,
    /// Joint probabilities of (this case, AB in the given Bell state).
    pub joint: Vec<(HyperBellSpec, f64)>,
    /// Normalized AB state given the case; `None` when it never occurs.
    pub posterior: Option<MixedEnsemble>,
}

impl CaseRecord {
    /// True for the all-different case, whose pairs are thrown away.
    pub fn discarded(&self) -> bool {
        self.case.id() == 2
    }

    /// Joint probability of this case and AB carrying `label` in `dof`.
    pub fn dof_probability(&self, dof: Dof, label: BellLabel) -> f64 {
        self.joint
            .iter()
            .filter(|(s, _)| s.get(dof) == Some(label))
            .map(|(_, m)| m)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step1Result {
    /// All eight cases in id order.
    pub cases: Vec<CaseRecord>,
    /// Total probability that every photon survived the checks.
    pub survival: f64,
}

impl Step1Result {
    pub fn case(&self, case: CaseId) -> &CaseRecord {
        &self.cases[case.index()]
    }

    pub fn probabilities(&self) -> [f64; 8] {
        std::array::from_fn(|i| self.cases[i].probability)
    }
}

/// Runs one party's polarization and spatial checks on photons (p1, p2),
/// returning every (P, F, S) parity record with its unnormalized state.
pub fn party_checks(
    state: &StateVector,
    photon1: PhotonId,
    photon2: PhotonId,
    units: [NvUnit; 3],
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Vec<([Parity; 3], StateVector)>> {
    let mut out = Vec::new();
    let after_p = p_qnd_evolve(state, photon1, photon2, units[0], mode, refl)?;
    for (rp, sp) in project_parities(&after_p, &units[..1])? {
        let after_s = s_qnd_evolve(&sp, photon1, photon2, units[1], units[2], mode, refl)?;
        for (rs, ss) in project_parities(&after_s, &units[1..])? {
            out.push(([rp[0], rs[0], rs[1]], ss));
        }
    }
    Ok(out)
}

/// Bit-flip corrections, Hadamards on C and D, detection and feed-forward.
/// Returns the unnormalized AB Bell populations summed over detection
/// results.
pub fn detect_and_correct(
    state: &StateVector,
    ac: [Parity; 3],
    bd: [Parity; 3],
) -> Result<Vec<(HyperBellSpec, f64)>> {
    let (c, d) = (PhotonId::C, PhotonId::D);
    let mut gates = Vec::with_capacity(12);
    for (k, dof) in Dof::PFS.into_iter().enumerate() {
        if ac[k] == Parity::Odd {
            gates.push(GateOp::SigmaX { photon: c, dof });
        }
        if bd[k] == Parity::Odd {
            gates.push(GateOp::SigmaX { photon: d, dof });
        }
        gates.push(GateOp::Hadamard { photon: c, dof });
        gates.push(GateOp::Hadamard { photon: d, dof });
    }
    let s = apply_all(state, &gates)?;
    let labels: Vec<QubitLabel> = Dof::PFS
        .into_iter()
        .flat_map(|dof| [c, d, PhotonId::B].map(|p| QubitLabel::photon(p, dof)))
        .collect();
    let s = s.apply_diagonal(&labels, |b| {
        let flips = b.chunks(3).filter(|x| (x[0] ^ x[1]) & x[2] == 1).count();
        Complex64::new(if flips % 2 == 1 { -1.0 } else { 1.0 }, 0.0)
    })?;
    bell_weights(&s, (PhotonId::A, PhotonId::B), &Dof::PFS)
}

/// Case-resolved AB populations for one pure joint input.
fn simulate_term(
    ab: HyperBellSpec,
    cd: HyperBellSpec,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<TermResult> {
    let input = make_hyper_bell(ab, (PhotonId::A, PhotonId::B))?
        .tensor(&make_hyper_bell(cd, (PhotonId::C, PhotonId::D))?)?;
    let mut out = Vec::new();
    for (ac, alice) in party_checks(&input, PhotonId::A, PhotonId::C, ALICE_UNITS, mode, refl)? {
        for (bd, bob) in party_checks(&alice, PhotonId::B, PhotonId::D, BOB_UNITS, mode, refl)? {
            out.push((classify(ac, bd), detect_and_correct(&bob, ac, bd)?));
        }
    }
    Ok(out)
}

fn require_canonical(e: &MixedEnsemble, name: &str) -> Result<()> {
    if e.is_product_bit_flip() {
        Ok(())
    } else {
        Err(argument(format!(
            "{name} is not a product bit-flip ensemble"
        )))
    }
}

type TermResult = Vec<(CaseId, Vec<(HyperBellSpec, f64)>)>;

/// Memoized per-term simulations for one mode and reflection pair. A joint
/// term's branch populations do not depend on the ensemble weights, so
/// repeated runs (later rounds, other fidelities) only reweight them.
#[derive(Debug, Clone)]
pub struct Step1Cache {
    mode: InteractionMode,
    refl: ReflectionPair,
    terms: BTreeMap<(HyperBellSpec, HyperBellSpec), TermResult>,
}

impl Step1Cache {
    pub fn new(mode: InteractionMode, refl: &ReflectionPair) -> Self {
        Self {
            mode,
            refl: *refl,
            terms: BTreeMap::new(),
        }
    }

    /// Exact enumeration of the first step over all joint input terms.
    pub fn step1(
        &mut self,
        ensemble_ab: &MixedEnsemble,
        ensemble_cd: &MixedEnsemble,
    ) -> Result<Step1Result> {
        require_canonical(ensemble_ab, "the AB ensemble")?;
        require_canonical(ensemble_cd, "the CD ensemble")?;
        let joint: Vec<(f64, HyperBellSpec, HyperBellSpec)> = ensemble_ab
            .terms()
            .iter()
            .flat_map(|(wa, a)| {
                ensemble_cd
                    .terms()
                    .iter()
                    .map(move |(wc, c)| (wa * wc, *a, *c))
            })
            .collect();
        let missing: Vec<(HyperBellSpec, HyperBellSpec)> = joint
            .iter()
            .map(|(_, a, c)| (*a, *c))
            .filter(|k| !self.terms.contains_key(k))
            .collect();
        let (mode, refl) = (self.mode, self.refl);
        let fresh = missing
            .par_iter()
            .map(|(ab, cd)| simulate_term(*ab, *cd, mode, &refl).map(|r| ((*ab, *cd), r)))
            .collect::<Result<Vec<_>>>()?;
        self.terms.extend(fresh);

        let mut acc: Vec<BTreeMap<HyperBellSpec, f64>> = vec![BTreeMap::new(); 8];
        for (w, ab, cd) in &joint {
            for (case, populations) in &self.terms[&(*ab, *cd)] {
                for (spec, m) in populations {
                    *acc[case.index()].entry(*spec).or_default() += w * m;
                }
            }
        }
        let cases = CaseId::all()
            .into_iter()
            .zip(acc)
            .map(|(case, masses)| {
                let joint: Vec<(HyperBellSpec, f64)> = masses
                    .into_iter()
                    .filter(|(_, m)| *m > MASS_FLOOR)
                    .collect();
                let probability: f64 = joint.iter().map(|(_, m)| m).sum();
                let posterior = if probability > 0.0 {
                    Some(MixedEnsemble::from_masses(
                        joint.iter().map(|(s, m)| (*m, *s)),
                    )?)
                } else {
                    None
                };
                Ok(CaseRecord {
                    case,
                    probability,
                    joint,
                    posterior,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let survival = cases.iter().map(|c| c.probability).sum();
        Ok(Step1Result { cases, survival })
    }
}

/// Exact enumeration of the first step over all joint input terms.
pub fn step1(
    ensemble_ab: &MixedEnsemble,
    ensemble_cd: &MixedEnsemble,
    mode: InteractionMode,
    refl: &ReflectionPair,
) -> Result<Step1Result> {
    Step1Cache::new(mode, refl).step1(ensemble_ab, ensemble_cd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_pairs_always_land_in_case_one() {
        let e = MixedEnsemble::canonical(1.0, 1.0, 1.0).unwrap();
        let r = step1(&e, &e, InteractionMode::Ideal, &ReflectionPair::ideal()).unwrap();
        let c1 = r.case(CaseId::new(1).unwrap());
        assert!((c1.probability - 1.0).abs() < 1e-12);
        assert!((c1.posterior.as_ref().unwrap().fidelity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn case_one_posterior_follows_purification_map() {
        let e = MixedEnsemble::canonical(0.8, 0.7, 0.9).unwrap();
        let r = step1(&e, &e, InteractionMode::Ideal, &ReflectionPair::ideal()).unwrap();
        assert!((r.survival - 1.0).abs() < 1e-12);
        let post = r.case(CaseId::new(1).unwrap()).posterior.clone().unwrap();
        for (k, f) in [0.8f64, 0.7, 0.9].into_iter().enumerate() {
            let expected = f * f / (f * f + (1.0 - f) * (1.0 - f));
            assert!((post.dof_fidelities()[k] - expected).abs() < 1e-12);
        }
        assert!(post.is_product_bit_flip());
    }

    #[test]
    fn non_canonical_input_is_rejected() {
        let odd =
            MixedEnsemble::new(vec![(1.0, HyperBellSpec::uniform(BellLabel::PSI_MINUS))]).unwrap();
        let e = MixedEnsemble::canonical(0.8, 0.8, 0.8).unwrap();
        assert!(step1(&odd, &e, InteractionMode::Ideal, &ReflectionPair::ideal()).is_err());
    }
}
