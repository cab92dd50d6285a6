use hyperepp::cavity::{CavityParams, InteractionMode, ReflectionPair};
use hyperepp::hilbert::{make_hyper_bell, BellLabel, Dof, HyperBellSpec, PhotonId};
use hyperepp::protocol::{
    efficiency_y2, iterate_fidelity, run_epp, simulate_inventory, step2_execute, step2_plan, CaseId,
};

const PHI: BellLabel = BellLabel::PHI_PLUS;
const PSI: BellLabel = BellLabel::PSI_PLUS;

fn even_count(spec: HyperBellSpec) -> usize {
    Dof::PFS
        .into_iter()
        .filter(|d| spec.get(*d) == Some(PHI))
        .count()
}

#[test]
fn every_second_step_leaves_ab_with_more_even_components_in_some_dof() {
    let ideal = ReflectionPair::ideal();
    let start = (
        HyperBellSpec::new(PSI, PHI, PHI),
        HyperBellSpec::new(PHI, PSI, PSI),
    );
    let ab = make_hyper_bell(start.0, (PhotonId::A, PhotonId::B)).unwrap();
    let a2b2 = make_hyper_bell(start.1, (PhotonId::APrime, PhotonId::BPrime)).unwrap();
    for case in 3..=8 {
        let plan = step2_plan(CaseId::new(case).unwrap()).unwrap();
        let out = step2_execute(&plan, &ab, &a2b2, InteractionMode::Ideal, &ideal).unwrap();
        let (x, y) = out.product_specs(1e-12).unwrap().expect("product output");
        // One of the two output pairs always gains an even component.
        let gained = [x, y].iter().any(|s| {
            Dof::PFS
                .into_iter()
                .any(|d| s.get(d) == Some(PHI) && start.0.get(d) == Some(PSI))
        });
        assert!(gained, "case {case}: {x:?} {y:?}");
        assert_eq!(
            even_count(x) + even_count(y),
            even_count(start.0) + even_count(start.1)
        );
    }
}

#[test]
fn ideal_rounds_conserve_probability_and_track_closed_forms() {
    let ideal = ReflectionPair::ideal();
    for (f1, f2, f3) in [(0.8, 0.8, 0.8), (0.6, 0.9, 0.75), (0.95, 0.55, 0.85)] {
        let report = run_epp(f1, f2, f3, 2, InteractionMode::Ideal, &ideal).unwrap();
        for (n, round) in report.rounds.iter().enumerate() {
            let total = round.kept + round.discarded + round.step2_consumed;
            assert!((total - 1.0).abs() < 1e-12, "round {}: {total}", n + 1);
            assert!(round
                .case_probabilities()
                .iter()
                .all(|p| (0.0..=1.0).contains(p)));
            let direct = iterate_fidelity(f1, f2, f3, n + 1).unwrap();
            assert!((round.fidelity - direct.total).abs() < 1e-12);
        }
        let y2 = efficiency_y2(f1, f2, f3).unwrap();
        assert!((report.rounds[0].y2 - y2).abs() < 1e-12);
    }
}

#[test]
fn perfect_input_is_kept_with_certainty() {
    let r = run_epp(
        1.0,
        1.0,
        1.0,
        1,
        InteractionMode::Ideal,
        &ReflectionPair::ideal(),
    )
    .unwrap();
    assert!((r.final_fidelity() - 1.0).abs() < 1e-12);
    assert!((r.rounds[0].y2 - 1.0).abs() < 1e-12);
}

#[test]
fn realistic_round_loses_photons_but_still_purifies() {
    let refl = ReflectionPair::from_params(&CavityParams::barclay()).unwrap();
    let report = run_epp(0.8, 0.8, 0.8, 1, InteractionMode::Realistic, &refl).unwrap();
    let round = &report.rounds[0];
    assert!(round.lost > 0.0 && round.lost < 1.0);
    let total = round.kept + round.discarded + round.step2_consumed + round.lost;
    assert!((total - 1.0).abs() < 1e-9, "{total}");
    assert!(round.fidelity > 0.8f64.powi(3));
    for pair in &round.pairs {
        assert!(pair.survival > 0.0 && pair.survival < 1.0);
    }
    let ideal = run_epp(
        0.8,
        0.8,
        0.8,
        1,
        InteractionMode::Ideal,
        &ReflectionPair::ideal(),
    )
    .unwrap();
    assert!(round.y2 < ideal.rounds[0].y2);
}

#[test]
fn finite_inventory_tracks_pairwise_accounting() {
    let report = run_epp(
        0.8,
        0.8,
        0.8,
        1,
        InteractionMode::Ideal,
        &ReflectionPair::ideal(),
    )
    .unwrap();
    let round = &report.rounds[0];
    let inv = simulate_inventory(round.case_probabilities(), [1.0; 3], 100_000, 11).unwrap();
    assert!(
        (inv.yield_fraction - round.y2).abs() < 1e-2,
        "{} vs {}",
        inv.yield_fraction,
        round.y2
    );
}
