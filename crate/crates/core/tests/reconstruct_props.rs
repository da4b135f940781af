use proptest::prelude::*;
use qverify::circuit::{choi_density, layer_unitary, random_circuit, Gate, GateSet, LayeredCircuit};
use qverify::device::{
    device_time_for_learning, DeviceProfile, InterruptibleDevice, NoiseConfig, SimulatedDevice, TimeUnits,
};
use qverify::experiments::haar_state;
use qverify::qcore::rng::seeded;
use qverify::qcore::{c64, identity, kron, partial_trace, trace_distance, Axis, DensityMatrix, StateVec};
use qverify::reconstruct::{
    all_preps, learn_multi, minimize_residual, prep_gates_for, LearnOptions, Matching, Sampling,
};

fn fig6_gates() -> GateSet {
    GateSet::from_builtin_names(&["I", "H", "X", "Y", "Z", "CNOT"]).unwrap()
}

fn device(c: &LayeredCircuit, seed: u64) -> SimulatedDevice {
    SimulatedDevice::new(DeviceProfile::new(c.clone(), 1.0).unwrap(), NoiseConfig::default(), seed).unwrap()
}

#[test]
fn prepared_states_are_the_collapsed_bell_partner() {
    let bell =
        StateVec::normalized(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap().density();
    for p in Axis::ALL {
        for x in [1i8, -1] {
            // project the ancilla (second qubit) onto the x-eigenspace of p
            let proj = (identity(2) + p.matrix() * c64(x as f64, 0.0)) * c64(0.5, 0.0);
            let full = kron(&identity(2), &proj);
            let post = &full * bell.matrix() * &full;
            let tr = post.trace().re;
            assert!((tr - 0.5).abs() < 1e-12);
            let collapsed = partial_trace(&DensityMatrix::new(post / c64(tr, 0.0)).unwrap(), &[0]).unwrap();
            let amp = prep_gates_for(p, x).state();
            let prepared = StateVec::from_amplitudes(amp.to_vec()).unwrap().density();
            assert!(trace_distance(&collapsed, &prepared).unwrap() < 1e-12, "{p:?} {x}");
        }
    }
}

#[test]
fn prep_enumeration_covers_each_assignment_once() {
    let preps = all_preps(2);
    assert_eq!(preps.len(), 36);
    for (i, a) in preps.iter().enumerate() {
        for b in &preps[i + 1..] {
            assert!(a.ancilla_basis != b.ancilla_basis || a.ancilla_outcome != b.ancilla_outcome);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn inverse_prefix_isolates_the_next_layer(n in 2usize..=3, d in 1usize..=3, seed in any::<u64>()) {
        let gs = fig6_gates();
        let hidden = random_circuit(n, d, &gs, 0.5, &mut seeded(seed)).unwrap();
        let dev = device(&hidden, seed);
        let opts = LearnOptions { sampling: Sampling::Exact, ..LearnOptions::default() };
        let learned = learn_multi(&dev, &gs, &opts).unwrap().learned;
        prop_assert_eq!(&learned, &hidden);
        let psi = haar_state(n, &mut seeded(seed ^ 7));
        for k in 1..=d {
            let prefix = LayeredCircuit::new(n, learned.layers()[..k - 1].to_vec()).unwrap().inverse();
            let mut out = psi.clone();
            dev.oracle_apply(&mut out, &prefix, k).unwrap();
            let mut expected = psi.clone();
            expected.apply_full_unchecked(&layer_unitary(&hidden.layers()[k - 1], n).unwrap());
            prop_assert!((out.inner(&expected).norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn ledger_matches_closed_form(d in 1usize..=4, shots in 1u64..=40, seed in any::<u64>()) {
        let gs = fig6_gates();
        let hidden = random_circuit(2, d, &gs, 0.5, &mut seeded(seed)).unwrap();
        let dev = device(&hidden, seed);
        let opts = LearnOptions { shots, matching: Matching::Nearest, seed, ..LearnOptions::default() };
        let report = learn_multi(&dev, &gs, &opts).unwrap();
        let expected = device_time_for_learning(d as u64, shots);
        prop_assert_eq!(TimeUnits(dev.ledger().units), expected);
        prop_assert_eq!(expected.0, shots * (d * d) as u64);
        prop_assert_eq!(report.ledger.total_time_units, expected.0);
    }

    #[test]
    fn residual_ignores_global_phase(phase in 0.0f64..std::f64::consts::TAU, which in 0usize..5) {
        let gs = fig6_gates();
        let g = &gs.singles()[which];
        let phased = Gate::new("phased", g.matrix() * c64(phase.cos(), phase.sin())).unwrap();
        let rho = choi_density(phased.matrix(), 1);
        prop_assert!(trace_distance(&rho, &choi_density(g.matrix(), 1)).unwrap() < 1e-12);
        let best = minimize_residual(&rho, gs.singles()).unwrap();
        prop_assert_eq!(best.gate, which);
        prop_assert!(best.residual.abs() < 1e-12);
        let mut swapped: Vec<Gate> = gs.singles().to_vec();
        swapped[which] = phased;
        let again = minimize_residual(&choi_density(g.matrix(), 1), &swapped).unwrap();
        prop_assert_eq!(again.gate, which);
        prop_assert!((again.residual - best.residual).abs() < 1e-12);
    }
}
