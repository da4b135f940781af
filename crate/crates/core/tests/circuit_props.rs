use nalgebra::DMatrix;
use proptest::prelude::*;
use qverify::circuit::{
    choi_density, emit_circuit, enumerate_config_classes, gate_set_resolution, layer_unitary, parse_circuit,
    random_circuit, random_layer, resolution_report, Gate, GateSet,
};
use qverify::qcore::rng::seeded;
use qverify::qcore::{c64, is_unitary, partial_trace, purity, trace_distance, CMatrix, C64};

fn fig6_gates() -> GateSet {
    GateSet::from_builtin_names(&["I", "H", "X", "Y", "Z", "CNOT"]).unwrap()
}

fn hxyz_cnot() -> GateSet {
    GateSet::from_builtin_names(&["H", "X", "Y", "Z", "CNOT"]).unwrap()
}

fn qft_gates() -> GateSet {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../circuits/qft2.json")).unwrap();
    parse_circuit(&text).unwrap().gate_set
}

/// Independent construction of window states: the unitary entry for a product
/// of blocks is the product of block entries read off the relevant bits, and
/// the reduced state is summed out index by index.
mod oracle {
    use super::*;

    pub struct Placed {
        pub qubits: Vec<usize>,
        pub matrix: CMatrix,
    }

    fn bits_of(x: usize, qubits: &[usize], q: usize) -> usize {
        qubits.iter().fold(0, |acc, &w| (acc << 1) | ((x >> (q - 1 - w)) & 1))
    }

    fn entry(blocks: &[Placed], q: usize, p: usize, a: usize) -> C64 {
        blocks.iter().fold(c64(1.0, 0.0), |acc, b| acc * b.matrix[(bits_of(p, &b.qubits, q), bits_of(a, &b.qubits, q))])
    }

    /// Reduced Choi state on `window` (wires `0..q` principal, `q..2q` ancilla).
    pub fn window_state(blocks: &[Placed], q: usize, window: &[usize]) -> DMatrix<C64> {
        let wires = 2 * q;
        let norm = 1.0 / (1usize << q) as f64;
        let amp: Vec<C64> =
            (0..1usize << wires).map(|idx| entry(blocks, q, idx >> q, idx & ((1 << q) - 1)) * norm.sqrt()).collect();
        let m = window.len();
        let mut rho = DMatrix::from_element(1 << m, 1 << m, c64(0.0, 0.0));
        let bit = |idx: usize, w: usize| (idx >> (wires - 1 - w)) & 1;
        for i in 0..amp.len() {
            for j in 0..amp.len() {
                let same_rest = (0..wires).filter(|w| !window.contains(w)).all(|w| bit(i, w) == bit(j, w));
                if !same_rest {
                    continue;
                }
                let x = window.iter().fold(0, |acc, &w| (acc << 1) | bit(i, w));
                let y = window.iter().fold(0, |acc, &w| (acc << 1) | bit(j, w));
                rho[(x, y)] += amp[i] * amp[j].conj();
            }
        }
        rho
    }

    pub fn svd_trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a - b).singular_values().iter().sum::<f64>() / 2.0
    }

    /// Raw class counts and half the smallest distance between distinct states.
    pub fn resolution(gs: &GateSet) -> ([usize; 5], f64) {
        let s: Vec<CMatrix> = gs.singles().iter().map(|g| g.matrix().clone()).collect();
        let d: Vec<CMatrix> = gs.doubles().iter().map(|g| g.matrix().clone()).collect();
        let single = |i: usize, q: usize| Placed { qubits: vec![q], matrix: s[i].clone() };
        // both orientations, expressed through the qubit order of the block
        let dbl = |i: usize, a: usize, b: usize| Placed { qubits: vec![a, b], matrix: d[i].clone() };
        let orient: Vec<(usize, bool)> = (0..d.len()).flat_map(|i| [(i, false), (i, true)]).collect();
        let on = |(i, rev): (usize, bool), a: usize, b: usize| if rev { dbl(i, b, a) } else { dbl(i, a, b) };
        let mut counts = [0usize; 5];
        let mut states = Vec::new();
        for a in 0..s.len() {
            for b in 0..s.len() {
                states.push(window_state(&[single(a, 0), single(b, 1)], 2, &[0, 1, 2, 3]));
                counts[0] += 1;
            }
        }
        for &g in &orient {
            states.push(window_state(&[on(g, 0, 1)], 2, &[0, 1, 2, 3]));
            counts[1] += 1;
        }
        for a in 0..s.len() {
            for &g in &orient {
                states.push(window_state(&[single(a, 0), on(g, 1, 2)], 3, &[0, 1, 3, 4]));
                counts[2] += 1;
            }
        }
        for &g in &orient {
            for b in 0..s.len() {
                states.push(window_state(&[on(g, 0, 1), single(b, 2)], 3, &[1, 2, 4, 5]));
                counts[3] += 1;
            }
        }
        for &g in &orient {
            for &h in &orient {
                states.push(window_state(&[on(g, 0, 1), on(h, 2, 3)], 4, &[1, 2, 5, 6]));
                counts[4] += 1;
            }
        }
        let mut best = f64::INFINITY;
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                let t = svd_trace_distance(&states[i], &states[j]);
                if t > 1e-9 {
                    best = best.min(t);
                }
            }
        }
        // symmetric doubles yield the same state in both orientations
        for i in 0..d.len() {
            let a = window_state(&[dbl(i, 0, 1)], 2, &[0, 1, 2, 3]);
            let b = window_state(&[dbl(i, 1, 0)], 2, &[0, 1, 2, 3]);
            if svd_trace_distance(&a, &b) < 1e-9 {
                counts[1] -= 1;
                counts[2] -= s.len();
                counts[3] -= s.len();
            }
        }
        (counts, best / 2.0)
    }
}

#[test]
fn resolution_matches_independent_oracle() {
    let (counts, d) = oracle::resolution(&fig6_gates());
    assert!((d - 0.25).abs() < 1e-12, "oracle d = {d}");
    assert_eq!(counts, [25, 2, 10, 10, 4]);
    assert!((gate_set_resolution(&fig6_gates()).unwrap().value() - d).abs() < 1e-12);
    assert_eq!(resolution_report(&fig6_gates()).unwrap().raw_counts, counts);

    let (counts, d) = oracle::resolution(&hxyz_cnot());
    assert_eq!(counts, [16, 2, 8, 8, 4]);
    assert!((d - 0.25).abs() < 1e-12);
    let report = resolution_report(&hxyz_cnot()).unwrap();
    assert_eq!(report.raw_counts, [16, 2, 8, 8, 4]);
    assert!((report.resolution.value() - 0.25).abs() < 1e-12);

    let (_, d) = oracle::resolution(&qft_gates());
    let frozen = 0.5 * (std::f64::consts::PI / 8.0).sin();
    assert!((d - frozen).abs() < 1e-12, "oracle d = {d}, frozen {frozen}");
    assert!((gate_set_resolution(&qft_gates()).unwrap().value() - frozen).abs() < 1e-12);
}

#[test]
fn choi_marginals_have_expected_purity() {
    for name in ["I", "H", "X", "Y", "Z", "S", "T"] {
        let g = Gate::builtin(name).unwrap();
        let rho = choi_density(g.matrix(), 1);
        assert!((purity(&rho).unwrap() - 1.0).abs() < 1e-12, "{name}");
    }
    let cnot = Gate::builtin("CNOT").unwrap();
    let rho = choi_density(cnot.matrix(), 2);
    for q in 0..2 {
        let marginal = partial_trace(&rho, &[q, q + 2]).unwrap();
        assert!((purity(&marginal).unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn config_elements_are_states_separated_by_twice_the_resolution() {
    for gs in [fig6_gates(), qft_gates()] {
        let elements = enumerate_config_classes(&gs).unwrap();
        let d_c = gate_set_resolution(&gs).unwrap().value();
        for el in &elements {
            assert!((el.state.trace() - 1.0).abs() < 1e-12);
            assert!(el.state.is_psd());
        }
        for i in 0..elements.len() {
            for j in (i + 1)..elements.len() {
                let t = trace_distance(&elements[i].state, &elements[j].state).unwrap();
                assert!(t >= 2.0 * d_c - 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layer_unitaries_are_unitary(n in 1usize..=4, pair_prob in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let layer = random_layer(n, &qft_gates(), pair_prob, &mut rng).unwrap();
        prop_assert!(is_unitary(&layer_unitary(&layer, n).unwrap(), 1e-10));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn circuit_files_round_trip(n in 1usize..=5, d in 0usize..=6, pair_prob in 0.0f64..=1.0, seed in any::<u64>()) {
        let gs = qft_gates();
        let mut rng = seeded(seed);
        let c = random_circuit(n, d, &gs, pair_prob, &mut rng).unwrap();
        let doc = parse_circuit(&emit_circuit(&c, &gs)).unwrap();
        prop_assert_eq!(&doc.circuit, &c);
        prop_assert_eq!(&doc.gate_set, &gs);
    }
}
