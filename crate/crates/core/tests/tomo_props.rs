use proptest::prelude::*;
use qverify::device::ShotRecord;
use qverify::experiments::{haar_state, state_tomography};
use qverify::qcore::rng::seeded;
use qverify::qcore::{exact_pauli_distribution, partial_trace, trace_distance, Outcome, PauliBasis, StateVec};
use qverify::tomo::{pauli_tomo, required_samples, PauliString, RecordSet, SampleBound};

/// Every basis setting and outcome of `psi`, weighted by its probability
/// under uniformly random bases.
fn exact_records(psi: &StateVec) -> RecordSet {
    let n = psi.n_qubits();
    let bases = PauliBasis::all(n);
    let mut rs = RecordSet::new(n);
    let dummy: PauliBasis = "Z".repeat(n).parse().unwrap();
    for b in &bases {
        let dist = exact_pauli_distribution(psi, b).unwrap();
        for (bits, p) in dist.probabilities.iter().enumerate() {
            rs.push(ShotRecord {
                shot_id: rs.len() as u64,
                principal_basis: b.clone(),
                principal_outcome: Outcome::from_bits(bits, n),
                ancilla_basis: dummy.clone(),
                ancilla_outcome: Outcome(vec![1; n]),
                weight: p / bases.len() as f64,
            })
            .unwrap();
        }
    }
    rs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_records_give_exact_coefficients(n in 1usize..=3, seed in any::<u64>()) {
        let psi = haar_state(n, &mut seeded(seed));
        let rs = exact_records(&psi);
        let subsets: Vec<Vec<usize>> = if n == 1 { vec![vec![0]] } else { vec![vec![0, n - 1]] };
        let m = subsets[0].len();
        let est = &pauli_tomo(m, &rs, Some(&subsets)).unwrap()[0];
        let truth = partial_trace(&psi.density(), &subsets[0]).unwrap();
        for (i, c) in est.coefficients.iter().enumerate() {
            let expected = truth.pauli_expectation(&PauliString::from_index(i, m));
            prop_assert!((c - expected).abs() < 1e-10);
        }
        prop_assert!(trace_distance(&est.matrix, &truth).unwrap() < 1e-10);
    }

    #[test]
    fn compatible_weight_splits_by_thirds(n in 2usize..=3, seed in any::<u64>()) {
        let psi = haar_state(n, &mut seeded(seed));
        let rs = exact_records(&psi);
        let subsets = vec![vec![0, 1]];
        let est = &pauli_tomo(2, &rs, Some(&subsets)).unwrap()[0];
        for (i, &count) in est.compat_counts.iter().enumerate() {
            let letters = PauliString::from_index(i, 2).0.iter().filter(|&&l| l != 0).count();
            prop_assert!((count - 3f64.powi(-(letters as i32))).abs() < 1e-12);
        }
    }
}

#[test]
fn sampled_counts_total_the_shot_count() {
    let mut rng = seeded(4);
    let psi = haar_state(3, &mut rng);
    let shots = 5000;
    let subsets = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
    for est in state_tomography(&psi, &subsets, shots, &mut rng).unwrap() {
        assert_eq!(est.compat_counts[0], shots as f64);
        let singles: f64 = (1..4).map(|l| est.compat_counts[l]).sum();
        assert_eq!(singles, shots as f64);
    }
}

#[test]
fn single_state_budget_meets_its_failure_rate() {
    let (eps, delta) = (0.2, 0.1);
    let shots = required_samples(SampleBound::SingleState { m: 2, n: 2 }, eps, delta, 1.0).unwrap();
    let mut rng = seeded(2);
    let trials = 100;
    let mut failures = 0;
    for _ in 0..trials {
        let psi = haar_state(2, &mut rng);
        let est = &state_tomography(&psi, &[vec![0, 1]], shots, &mut rng).unwrap()[0];
        if trace_distance(&est.matrix, &psi.density()).unwrap() >= eps {
            failures += 1;
        }
    }
    assert!(failures as f64 / trials as f64 <= delta, "{failures} failures");
}

#[test]
fn records_round_trip_through_jsonl() {
    let psi = haar_state(2, &mut seeded(9));
    let rs = exact_records(&psi);
    assert_eq!(RecordSet::from_jsonl(2, &rs.to_jsonl()).unwrap(), rs);
}
