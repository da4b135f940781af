use rand::Rng;

use crate::device::PrepGates;
use crate::qcore::{Axis, Outcome, PauliBasis};

/// Classically sampled ancilla measurement and the matching input state.
#[derive(Debug, Clone, PartialEq)]
pub struct PrepResult {
    pub prep: Vec<PrepGates>,
    pub ancilla_basis: PauliBasis,
    pub ancilla_outcome: Outcome,
}

/// Preparation flags for ancilla axis `p` and outcome `x`. The prepared state
/// `S^{b_S} H^{b_H} X^{b_X}|0⟩` is the complex conjugate of the ancilla
/// eigenstate, which is what the principal qubit of a Bell pair collapses to.
pub fn prep_gates_for(p: Axis, x: i8) -> PrepGates {
    let is_y = p == Axis::Y;
    PrepGates { x: (is_y && x == 1) || (!is_y && x == -1), h: p != Axis::Z, s: is_y }
}

/// Uniform ancilla basis and outcome per qubit.
pub fn prep_init<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PrepResult {
    let mut prep = Vec::with_capacity(n);
    let mut axes = Vec::with_capacity(n);
    let mut outcomes = Vec::with_capacity(n);
    for _ in 0..n {
        let p = Axis::ALL[rng.random_range(0..3)];
        let x: i8 = if rng.random::<bool>() { 1 } else { -1 };
        prep.push(prep_gates_for(p, x));
        axes.push(p);
        outcomes.push(x);
    }
    PrepResult { prep, ancilla_basis: PauliBasis(axes), ancilla_outcome: Outcome(outcomes) }
}

/// All `6^n` ancilla (basis, outcome) assignments in a fixed order.
pub fn all_preps(n: usize) -> Vec<PrepResult> {
    let total = 6usize.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut axes = vec![Axis::X; n];
            let mut outs = vec![1i8; n];
            for q in (0..n).rev() {
                let c = code % 6;
                code /= 6;
                axes[q] = Axis::ALL[c / 2];
                outs[q] = if c % 2 == 0 { 1 } else { -1 };
            }
            let prep = axes.iter().zip(&outs).map(|(&p, &x)| prep_gates_for(p, x)).collect();
            PrepResult { prep, ancilla_basis: PauliBasis(axes), ancilla_outcome: Outcome(outs) }
        })
        .collect()
}
