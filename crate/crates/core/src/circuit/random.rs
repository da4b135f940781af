use rand::seq::SliceRandom;
use rand::Rng;

use super::{Block, CircuitError, GateSet, Layer, LayeredCircuit};

/// Random strict layer over `gs`: qubits are shuffled and, when the set has
/// two-qubit gates, consecutive pairs become a two-qubit block with
/// probability `pair_prob`. Orientation and gates are uniform.
pub fn random_layer<R: Rng + ?Sized>(
    n: usize,
    gs: &GateSet,
    pair_prob: f64,
    rng: &mut R,
) -> Result<Layer, CircuitError> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        let can_pair = i + 1 < n && !gs.doubles().is_empty();
        let must_pair = gs.singles().is_empty();
        if can_pair && (must_pair || rng.random_bool(pair_prob)) {
            let g = gs.doubles()[rng.random_range(0..gs.doubles().len())].clone();
            blocks.push(Block::pair(order[i], order[i + 1], g));
            i += 2;
        } else if gs.singles().is_empty() {
            return Err(CircuitError::IdleQubit { layer: 0, qubit: order[i] });
        } else {
            let g = gs.singles()[rng.random_range(0..gs.singles().len())].clone();
            blocks.push(Block::single(order[i], g));
            i += 1;
        }
    }
    Layer::new(n, blocks)
}

/// `d` independent random layers.
pub fn random_circuit<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    gs: &GateSet,
    pair_prob: f64,
    rng: &mut R,
) -> Result<LayeredCircuit, CircuitError> {
    let layers = (0..d).map(|_| random_layer(n, gs, pair_prob, rng)).collect::<Result<Vec<_>, _>>()?;
    LayeredCircuit::new(n, layers)
}
