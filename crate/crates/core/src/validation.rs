//! Self checks: circuit simulations against the closed forms, ideal-map
//! exactness, first-step bookkeeping against first-principles products, and
//! a list of printed reference entries that disagree with derivations.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::analytics::{
    swap_performance, swap_performance_balanced, QndPerformance, SwapAmplitudes, SwapPerformance,
};
use crate::cavity::{InteractionMode, ReflectionPair};
use crate::circuits::{p_qnd, p_qnd_evolve, pp_swap, pp_swap_coherent, s_qnd, s_qnd_evolve};
use crate::error::Result;
use crate::hilbert::{
    fidelity, make_hyper_bell, BellLabel, Dof, HyperBellSpec, MixedEnsemble, NvUnit, PhotonId,
    QubitLabel, StateVector,
};
use crate::protocol::{
    derived_kets, derived_table_cell, ket_discrepancies, party_checks, table_discrepancies, CaseId,
    KetGroup, Step1Cache, Step1Result, ALICE_UNITS, BOB_UNITS,
};

/// Agreement required between simulated and closed-form values.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
/// Agreement required for exact (ideal-limit) maps.
pub const EXACT_TOLERANCE: f64 = 1e-12;

const PAIR: (PhotonId, PhotonId) = (PhotonId::A, PhotonId::B);

/// Cooperativities g/√(κγ) = 0.5, 1.0, …, 5.0.
pub fn standard_grid() -> Vec<f64> {
    (1..=10).map(|k| 0.5 * k as f64).collect()
}

fn label(odd: bool) -> BellLabel {
    if odd {
        BellLabel::PSI_PLUS
    } else {
        BellLabel::PHI_PLUS
    }
}

fn real_vs_ideal(real: &StateVector, ideal: &StateVector) -> Result<(f64, f64)> {
    Ok((fidelity(real, ideal)?, real.norm_sqr() / ideal.norm_sqr()))
}

/// QND fidelities and efficiencies obtained by simulating the circuits:
/// the realistic output (NV spins unmeasured) is compared with the ideal
/// output, and the efficiency is the surviving squared norm.
pub fn circuit_qnd_performance(refl: &ReflectionPair) -> Result<QndPerformance> {
    let ideal = ReflectionPair::ideal();
    let (u0, u1, u2) = (NvUnit(0), NvUnit(1), NvUnit(2));
    let mut f_p = [0.0; 2];
    let mut eta_p = [0.0; 2];
    for (k, odd) in [false, true].into_iter().enumerate() {
        let spec = HyperBellSpec::new(label(odd), BellLabel::PHI_PLUS, BellLabel::PHI_PLUS);
        let input = make_hyper_bell(spec, PAIR)?;
        let real = p_qnd_evolve(&input, PAIR.0, PAIR.1, u0, InteractionMode::Realistic, refl)?;
        let target = p_qnd_evolve(&input, PAIR.0, PAIR.1, u0, InteractionMode::Ideal, &ideal)?;
        (f_p[k], eta_p[k]) = real_vs_ideal(&real, &target)?;
    }
    let mut f_s = [0.0; 8];
    let mut eta_s = [0.0; 8];
    for p_odd in [false, true] {
        for f_odd in [false, true] {
            for s_odd in [false, true] {
                let k = QndPerformance::s_class(p_odd, f_odd, s_odd);
                let input = make_hyper_bell(
                    HyperBellSpec::new(label(p_odd), label(f_odd), label(s_odd)),
                    PAIR,
                )?;
                let real = s_qnd_evolve(
                    &input,
                    PAIR.0,
                    PAIR.1,
                    u1,
                    u2,
                    InteractionMode::Realistic,
                    refl,
                )?;
                let target = s_qnd_evolve(
                    &input,
                    PAIR.0,
                    PAIR.1,
                    u1,
                    u2,
                    InteractionMode::Ideal,
                    &ideal,
                )?;
                (f_s[k], eta_s[k]) = real_vs_ideal(&real, &target)?;
            }
        }
    }
    Ok(QndPerformance {
        f_p,
        eta_p,
        f_s,
        eta_s,
    })
}

/// Polarization-SWAP fidelity and efficiency from the circuit, with the
/// feed-forward applied coherently and the NV kept. The target is the
/// exchanged product state with the NV in (|+1⟩ + |−1⟩)/√2.
pub fn circuit_swap_performance(
    refl: &ReflectionPair,
    amps: &SwapAmplitudes,
) -> Result<SwapPerformance> {
    let (p1, p2) = (
        QubitLabel::photon(PhotonId::A, Dof::P),
        QubitLabel::photon(PhotonId::APrime, Dof::P),
    );
    let input = StateVector::qubit(p1, amps.alpha1, amps.beta1).tensor(&StateVector::qubit(
        p2,
        amps.alpha2,
        amps.beta2,
    ))?;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let target = StateVector::qubit(p1, amps.alpha2, amps.beta2)
        .tensor(&StateVector::qubit(p2, amps.alpha1, amps.beta1))?
        .tensor(&StateVector::qubit(QubitLabel::Nv(NvUnit(0)), h, h))?;
    let real = pp_swap_coherent(
        &input,
        PhotonId::A,
        PhotonId::APrime,
        NvUnit(0),
        InteractionMode::Realistic,
        refl,
    )?;
    let (f_swap, eta_swap) = real_vs_ideal(&real, &target)?;
    Ok(SwapPerformance { f_swap, eta_swap })
}

fn qnd_gap(a: &QndPerformance, b: &QndPerformance) -> (f64, f64) {
    let gap = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max)
    };
    (
        gap(&a.f_p, &b.f_p).max(gap(&a.eta_p, &b.eta_p)),
        gap(&a.f_s, &b.f_s).max(gap(&a.eta_s, &b.eta_s)),
    )
}

fn swap_gap(a: &SwapPerformance, b: &SwapPerformance) -> f64 {
    (a.f_swap - b.f_swap)
        .abs()
        .max((a.eta_swap - b.eta_swap).abs())
}

/// Fixed unbalanced SWAP inputs used alongside the balanced one.
pub fn sample_swap_amplitudes() -> Vec<SwapAmplitudes> {
    let unit = |a: Complex64, b: Complex64| {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        (a / n, b / n)
    };
    [
        ((0.6, 0.0), (0.8, 0.0), (0.28, 0.0), (0.96, 0.0)),
        ((0.3, 0.4), (0.5, -0.2), (0.9, 0.1), (-0.2, 0.3)),
        ((1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)),
    ]
    .into_iter()
    .map(|(a1, b1, a2, b2)| {
        let c = |x: (f64, f64)| Complex64::new(x.0, x.1);
        let (a1, b1) = unit(c(a1), c(b1));
        let (a2, b2) = unit(c(a2), c(b2));
        SwapAmplitudes::new(a1, b1, a2, b2).expect("normalized by construction")
    })
    .collect()
}

/// Largest circuit-vs-formula gaps over `grid` (cooperativities, resonant):
/// (P-QND, S-QND, SWAP).
pub fn oracle_gaps(grid: &[f64]) -> Result<(f64, f64, f64)> {
    let mut gaps = (0.0f64, 0.0f64, 0.0f64);
    for &coop in grid {
        let refl = ReflectionPair::from_cooperativity(coop);
        let (p, s) = qnd_gap(
            &circuit_qnd_performance(&refl)?,
            &QndPerformance::evaluate(&refl)?,
        );
        gaps.0 = gaps.0.max(p);
        gaps.1 = gaps.1.max(s);
        let balanced = SwapAmplitudes::balanced();
        let circuit = circuit_swap_performance(&refl, &balanced)?;
        gaps.2 = gaps
            .2
            .max(swap_gap(&circuit, &swap_performance_balanced(&refl)?));
        gaps.2 = gaps
            .2
            .max(swap_gap(&circuit, &swap_performance(&refl, &balanced)?));
        for amps in sample_swap_amplitudes() {
            gaps.2 = gaps.2.max(swap_gap(
                &circuit_swap_performance(&refl, &amps)?,
                &swap_performance(&refl, &amps)?,
            ));
        }
    }
    Ok(gaps)
}

/// Largest deviation of the ideal QNDs from a deterministic, state-preserving
/// parity readout over all 64 hyperentangled Bell inputs.
pub fn ideal_qnd_deviation() -> Result<f64> {
    let ideal = ReflectionPair::ideal();
    let mut worst = 0.0f64;
    for spec in HyperBellSpec::all() {
        let input = make_hyper_bell(spec, PAIR)?;
        let p = p_qnd(
            &input,
            PAIR.0,
            PAIR.1,
            NvUnit(0),
            InteractionMode::Ideal,
            &ideal,
        )?;
        let s = s_qnd(
            &input,
            PAIR.0,
            PAIR.1,
            NvUnit(1),
            NvUnit(2),
            InteractionMode::Ideal,
            &ideal,
        )?;
        if p.len() != 1 || s.len() != 1 {
            return Ok(f64::INFINITY);
        }
        let expected = (spec.p.parity, spec.f.parity, spec.s.parity);
        let got = (
            p[0].outcome.p_parity,
            s[0].outcome.f_parity,
            s[0].outcome.s_parity,
        );
        if got != (Some(expected.0), Some(expected.1), Some(expected.2)) {
            return Ok(f64::INFINITY);
        }
        for b in [&p[0], &s[0]] {
            worst = worst
                .max((b.probability - 1.0).abs())
                .max(b.state.max_abs_diff(&input)?);
        }
    }
    Ok(worst)
}

/// Largest deviation of the ideal polarization SWAP from an exact exchange
/// on the given product inputs, over both NV results.
pub fn ideal_swap_deviation(inputs: &[SwapAmplitudes]) -> Result<f64> {
    let ideal = ReflectionPair::ideal();
    let (p1, p2) = (
        QubitLabel::photon(PhotonId::A, Dof::P),
        QubitLabel::photon(PhotonId::APrime, Dof::P),
    );
    let mut worst = 0.0f64;
    for a in inputs {
        let input = StateVector::qubit(p1, a.alpha1, a.beta1)
            .tensor(&StateVector::qubit(p2, a.alpha2, a.beta2))?;
        let expected = StateVector::qubit(p1, a.alpha2, a.beta2)
            .tensor(&StateVector::qubit(p2, a.alpha1, a.beta1))?;
        let branches = pp_swap(
            &input,
            PhotonId::A,
            PhotonId::APrime,
            NvUnit(0),
            InteractionMode::Ideal,
            &ideal,
        )?;
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        worst = worst.max((total - 1.0).abs());
        for b in branches {
            worst = worst.max(b.state.max_abs_diff(&expected)?);
        }
    }
    Ok(worst)
}

/// Largest gap between enumerated first-step statistics and the
/// first-principles products: case probabilities, and joint probabilities
/// of each case with AB in φ⁺ or ψ⁺ in each DOF.
pub fn case_table_deviation(result: &Step1Result, fs: [f64; 3]) -> f64 {
    let mut worst = 0.0f64;
    for case in CaseId::all() {
        let rec = result.case(case);
        worst = worst.max((rec.probability - case.probability(fs)).abs());
        for (k, dof) in Dof::PFS.into_iter().enumerate() {
            let others: f64 = (0..3)
                .filter(|j| *j != k)
                .map(|j| case.patterns()[j].probability(fs[j]))
                .product();
            let (phi, psi) = derived_table_cell(case, dof);
            let expected = [phi.eval(fs[k]) * others, psi.eval(fs[k]) * others];
            let got = [
                rec.dof_probability(dof, BellLabel::PHI_PLUS),
                rec.dof_probability(dof, BellLabel::PSI_PLUS),
            ];
            for (g, e) in got.iter().zip(expected) {
                worst = worst.max((g - e).abs());
            }
        }
    }
    worst
}

/// Checks the derived ABCD kets against ideal parity projections of
/// simulated four-photon states. Returns the number of mismatching
/// (group, DOF, AB state) combinations.
pub fn ket_derivation_mismatches() -> Result<usize> {
    let ideal = ReflectionPair::ideal();
    let mut mismatches = 0;
    for group in KetGroup::ALL {
        for ab in [BellLabel::PHI_PLUS, BellLabel::PSI_PLUS] {
            let cd_odd = (ab.parity.bit() ^ group.ac.bit() ^ group.bd.bit()) == 1;
            let input =
                make_hyper_bell(HyperBellSpec::uniform(ab), PAIR)?.tensor(&make_hyper_bell(
                    HyperBellSpec::uniform(label(cd_odd)),
                    (PhotonId::C, PhotonId::D),
                )?)?;
            let mut supports: Vec<BTreeSet<String>> = vec![BTreeSet::new(); 3];
            for (ac, alice) in party_checks(
                &input,
                PhotonId::A,
                PhotonId::C,
                ALICE_UNITS,
                InteractionMode::Ideal,
                &ideal,
            )? {
                for (bd, bob) in party_checks(
                    &alice,
                    PhotonId::B,
                    PhotonId::D,
                    BOB_UNITS,
                    InteractionMode::Ideal,
                    &ideal,
                )? {
                    for (k, dof) in Dof::PFS.into_iter().enumerate() {
                        if ac[k] != group.ac || bd[k] != group.bd {
                            continue;
                        }
                        let pos: Vec<usize> = [PhotonId::A, PhotonId::B, PhotonId::C, PhotonId::D]
                            .iter()
                            .map(|p| bob.position(QubitLabel::photon(*p, dof)))
                            .collect::<Result<_>>()?;
                        for (i, a) in bob.amplitudes().iter().enumerate() {
                            if a.norm_sqr() > 1e-20 {
                                let sym = dof.symbols();
                                supports[k].insert(pos.iter().map(|p| sym[(i >> p) & 1]).collect());
                            }
                        }
                    }
                }
            }
            for (k, dof) in Dof::PFS.into_iter().enumerate() {
                let (x, y) = derived_kets(group, dof, ab);
                if supports[k] != BTreeSet::from([x, y]) {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(mismatches)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Printed reference entries that disagree with the derivations.
    pub flags: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{status} {} (max error {:.3e}, tolerance {:.0e})",
                c.name, c.max_error, c.tolerance
            )?;
        }
        for flag in &self.flags {
            writeln!(f, "FLAG {flag}")?;
        }
        Ok(())
    }
}

/// Fidelity triples used by the first-step bookkeeping check.
const TABLE_SAMPLES: [[f64; 3]; 3] = [[0.8, 0.8, 0.8], [0.62, 0.91, 0.77], [0.97, 0.55, 0.7]];

pub fn run_validation() -> Result<ValidationReport> {
    let (p_gap, s_gap, swap_gap) = oracle_gaps(&standard_grid())?;
    let mut swap_inputs = sample_swap_amplitudes();
    swap_inputs.push(SwapAmplitudes::balanced());

    let mut cache = Step1Cache::new(InteractionMode::Ideal, &ReflectionPair::ideal());
    let mut table_gap = 0.0f64;
    for fs in TABLE_SAMPLES {
        let e = MixedEnsemble::canonical(fs[0], fs[1], fs[2])?;
        table_gap = table_gap.max(case_table_deviation(&cache.step1(&e, &e)?, fs));
    }

    let check = |name: &str, max_error: f64, tolerance: f64| Check {
        name: name.to_string(),
        max_error,
        tolerance,
    };
    let checks = vec![
        check("P-QND circuit vs closed form", p_gap, ORACLE_TOLERANCE),
        check("S-QND circuit vs closed form", s_gap, ORACLE_TOLERANCE),
        check(
            "P-P SWAP circuit vs closed form",
            swap_gap,
            ORACLE_TOLERANCE,
        ),
        check(
            "ideal QND parity readout",
            ideal_qnd_deviation()?,
            EXACT_TOLERANCE,
        ),
        check(
            "ideal P-P SWAP exchange",
            ideal_swap_deviation(&swap_inputs)?,
            EXACT_TOLERANCE,
        ),
        check(
            "first-step case and Bell-outcome probabilities",
            table_gap,
            EXACT_TOLERANCE,
        ),
        check(
            "derived ABCD kets vs simulated parity projections",
            ket_derivation_mismatches()? as f64,
            0.0,
        ),
    ];
    let mut flags: Vec<String> = table_discrepancies()
        .iter()
        .map(|d| d.to_string())
        .collect();
    flags.extend(ket_discrepancies().iter().map(|d| d.to_string()));
    Ok(ValidationReport { checks, flags })
}
