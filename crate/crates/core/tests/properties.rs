use num_complex::Complex64;
use proptest::prelude::*;

use hyperepp::cavity::{InteractionMode, ReflectionPair};
use hyperepp::circuits::{p_qnd, p_qnd_evolve, pp_swap, s_qnd, s_qnd_evolve};
use hyperepp::hilbert::{
    fidelity, make_hyper_bell, Dof, HyperBellSpec, NvUnit, PhotonId, QubitLabel, StateVector,
};
use hyperepp::protocol::{efficiency_y1, efficiency_y2, iterate_fidelity, purify_once};

const A: PhotonId = PhotonId::A;
const B: PhotonId = PhotonId::B;

/// Random normalized state of the P, F, S qubits of photons A and B.
fn two_photon_state(parts: &[f64]) -> StateVector {
    let labels: Vec<QubitLabel> = [A, B]
        .into_iter()
        .flat_map(|p| Dof::PFS.map(|d| QubitLabel::photon(p, d)))
        .collect();
    let amps: Vec<Complex64> = parts
        .chunks(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect();
    StateVector::from_amplitudes(labels, amps)
        .unwrap()
        .normalized()
        .unwrap()
}

fn amplitudes() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 128)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
}

fn qubit() -> impl Strategy<Value = (Complex64, Complex64)> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("non-zero", |(a, b, c, d)| {
            a * a + b * b + c * c + d * d > 1e-3
        })
        .prop_map(|(a, b, c, d)| {
            let (x, y) = (Complex64::new(a, b), Complex64::new(c, d));
            let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
            (x / n, y / n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_checks_preserve_norm(parts in amplitudes()) {
        let s = two_photon_state(&parts);
        let ideal = ReflectionPair::ideal();
        let p = p_qnd_evolve(&s, A, B, NvUnit(0), InteractionMode::Ideal, &ideal).unwrap();
        let q = s_qnd_evolve(&s, A, B, NvUnit(1), NvUnit(2), InteractionMode::Ideal, &ideal).unwrap();
        prop_assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((q.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realistic_branches_account_for_all_probability(parts in amplitudes(), r in 0.0f64..1.0) {
        let s = two_photon_state(&parts);
        let refl = ReflectionPair::resonant(r);
        if let Ok(branches) = p_qnd(&s, A, B, NvUnit(0), InteractionMode::Realistic, &refl) {
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for b in &branches {
                prop_assert!(b.outcome.survival <= 1.0 + 1e-12);
                prop_assert!((b.state.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
        if let Ok(branches) = s_qnd(&s, A, B, NvUnit(1), NvUnit(2), InteractionMode::Realistic, &refl) {
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_is_symmetric_and_scale_invariant(x in amplitudes(), y in amplitudes(), k in 0.1f64..10.0, phase in 0.0f64..6.3) {
        let (a, b) = (two_photon_state(&x), two_photon_state(&y));
        let fab = fidelity(&a, &b).unwrap();
        prop_assert!((fab - fidelity(&b, &a).unwrap()).abs() < 1e-12);
        let scaled = a.scaled(Complex64::from_polar(k, phase));
        prop_assert!((fab - fidelity(&scaled, &b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn double_polarization_swap_restores_input(q1 in qubit(), q2 in qubit()) {
        let p1 = QubitLabel::photon(A, Dof::P);
        let p2 = QubitLabel::photon(PhotonId::APrime, Dof::P);
        let input = StateVector::qubit(p1, q1.0, q1.1).tensor(&StateVector::qubit(p2, q2.0, q2.1)).unwrap();
        let ideal = ReflectionPair::ideal();
        for once in pp_swap(&input, A, PhotonId::APrime, NvUnit(0), InteractionMode::Ideal, &ideal).unwrap() {
            for twice in pp_swap(&once.state, A, PhotonId::APrime, NvUnit(0), InteractionMode::Ideal, &ideal).unwrap() {
                prop_assert!(twice.state.max_abs_diff(&input).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn purification_expands_and_step_two_helps(f1 in 0.5001f64..0.9999, f2 in 0.5001f64..0.9999, f3 in 0.5001f64..0.9999) {
        let it = iterate_fidelity(f1, f2, f3, 1).unwrap();
        for (k, f) in [f1, f2, f3].into_iter().enumerate() {
            prop_assert!(it.per_dof[k] > f);
            prop_assert!((it.per_dof[k] - purify_once(f)).abs() < 1e-15);
        }
        prop_assert!(efficiency_y2(f1, f2, f3).unwrap() >= efficiency_y1(f1, f2, f3).unwrap());
    }
}

#[test]
fn hyper_bell_states_are_mutually_orthogonal() {
    let states: Vec<StateVector> = HyperBellSpec::all()
        .into_iter()
        .map(|s| make_hyper_bell(s, (A, B)).unwrap())
        .collect();
    for (i, x) in states.iter().enumerate() {
        for (j, y) in states.iter().enumerate() {
            let overlap = x.inner(y).unwrap().norm();
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((overlap - expected).abs() < 1e-12, "specs {i} and {j}");
        }
    }
}
