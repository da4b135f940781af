use proptest::prelude::*;
use qverify::experiments::{haar_state, haar_unitary};
use qverify::qcore::rng::seeded;
use qverify::qcore::{
    apply_unitary, exact_pauli_distribution, kron, partial_trace, relative_fidelity, sample_pauli, trace_distance,
    Axis, DensityMatrix, PauliBasis, StateVec,
};

fn mixed_state(n: usize, rank: usize, seed: u64) -> DensityMatrix {
    let mut rng = seeded(seed);
    let dim = 1 << n;
    let mut m = qverify::qcore::CMatrix::zeros(dim, dim);
    let weights: Vec<f64> = (0..rank).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        m += haar_state(n, &mut rng).density().matrix() * qverify::qcore::c64(w / total, 0.0);
    }
    DensityMatrix::new(m).unwrap()
}

fn distinct_targets(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    let mut rng = seeded(seed);
    use rand::seq::SliceRandom;
    all.shuffle(&mut rng);
    all.truncate(k);
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_unitary_preserves_norm(n in 1usize..=4, k in 1usize..=2, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let mut rng = seeded(seed);
        let psi = haar_state(n, &mut rng);
        let u = haar_unitary(1 << k, &mut rng);
        let targets = distinct_targets(n, k, seed ^ 1);
        let out = apply_unitary(&psi, &u, &targets).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(n in 2usize..=4, rank in 1usize..=3, seed in any::<u64>()) {
        let rho = mixed_state(n, rank, seed);
        let mut keep = distinct_targets(n, 1 + (seed as usize % (n - 1)), seed ^ 2);
        keep.sort();
        let red = partial_trace(&rho, &keep).unwrap();
        prop_assert!((red.trace() - 1.0).abs() < 1e-12);
        prop_assert!(red.is_psd());
    }

    #[test]
    fn partial_trace_commutes_with_local_unitaries(seed in any::<u64>()) {
        let rho = mixed_state(3, 2, seed);
        let mut rng = seeded(seed ^ 3);
        let u = haar_unitary(2, &mut rng);
        let v = haar_unitary(4, &mut rng);
        // U on qubit 0, V on qubits 1, 2 (traced out)
        let full = kron(&u, &v);
        let lhs = partial_trace(&rho.conjugate(&full), &[0]).unwrap();
        let rhs = partial_trace(&rho, &[0]).unwrap().conjugate(&u);
        prop_assert!(trace_distance(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn trace_distance_is_a_bounded_metric(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = mixed_state(2, 2, s1);
        let b = mixed_state(2, 1, s2);
        let c = mixed_state(2, 3, s3);
        let ab = trace_distance(&a, &b).unwrap();
        let ba = trace_distance(&b, &a).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
    }

    #[test]
    fn relative_fidelity_of_a_state_with_itself_is_one(n in 1usize..=3, rank in 1usize..=3, seed in any::<u64>()) {
        let a = mixed_state(n, rank, seed);
        prop_assert!((relative_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sampled_pauli_outcomes_match_born_rule() {
    let mut rng = seeded(11);
    let psi = haar_state(3, &mut rng);
    let basis = PauliBasis(vec![Axis::X, Axis::Y, Axis::Z]);
    let exact = exact_pauli_distribution(&psi, &basis).unwrap().probabilities;
    let shots = 100_000;
    let mut counts = vec![0f64; exact.len()];
    for _ in 0..shots {
        counts[sample_pauli(&psi, &basis, &mut rng).unwrap().to_bits()] += 1.0;
    }
    let tv: f64 = counts.iter().zip(&exact).map(|(c, p)| (c / shots as f64 - p).abs()).sum::<f64>() / 2.0;
    assert!(tv < 0.02, "tv = {tv}");
}

#[test]
fn basis_states_are_orthonormal() {
    for i in 0..4 {
        for j in 0..4 {
            let a = StateVec::basis(2, i).unwrap();
            let b = StateVec::basis(2, j).unwrap();
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((a.inner(&b).norm() - expected).abs() < 1e-15);
        }
    }
}
