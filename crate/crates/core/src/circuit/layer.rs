use crate::qcore::{CMatrix, StateVec};

use super::{CircuitError, Gate};

/// A gate laid on an ordered tuple of qubits; the first qubit is the most
/// significant index of the gate matrix (the control of a CNOT).
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub qubits: Vec<usize>,
    pub gate: Gate,
}

impl Block {
    pub fn new(qubits: Vec<usize>, gate: Gate) -> Block {
        Block { qubits, gate }
    }

    pub fn single(q: usize, gate: Gate) -> Block {
        Block { qubits: vec![q], gate }
    }

    pub fn pair(a: usize, b: usize, gate: Gate) -> Block {
        Block { qubits: vec![a, b], gate }
    }

    fn min_qubit(&self) -> usize {
        self.qubits.iter().copied().min().unwrap_or(usize::MAX)
    }
}

/// One layer: a partition of all qubits into blocks of size 1 or 2, each with a
/// gate of matching arity. Blocks are kept sorted by their smallest qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    blocks: Vec<Block>,
}

impl Layer {
    pub fn new(n: usize, mut blocks: Vec<Block>) -> Result<Layer, CircuitError> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.qubits.is_empty() || b.qubits.len() > 2 {
                return Err(CircuitError::InvalidPartition(format!("block {:?} must cover 1 or 2 qubits", b.qubits)));
            }
            if b.gate.arity() != b.qubits.len() {
                return Err(CircuitError::ArityMismatch {
                    gate: b.gate.name().into(),
                    expected: b.qubits.len(),
                    actual: b.gate.arity(),
                });
            }
            for &q in &b.qubits {
                if q >= n {
                    return Err(CircuitError::InvalidPartition(format!("qubit {q} out of range for n = {n}")));
                }
                if seen[q] {
                    return Err(CircuitError::InvalidPartition(format!("qubit {q} appears in two blocks")));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(CircuitError::InvalidPartition(format!("qubit {q} is not covered")));
        }
        blocks.sort_by_key(Block::min_qubit);
        Ok(Layer { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The partition `S`, each block with its qubits in gate order.
    pub fn structure(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.qubits.clone()).collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.blocks.iter().map(|b| b.qubits.len()).sum()
    }

    /// Block acting on qubit `q`.
    pub fn block_of(&self, q: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.qubits.contains(&q))
    }

    pub fn dagger(&self) -> Layer {
        Layer { blocks: self.blocks.iter().map(|b| Block::new(b.qubits.clone(), b.gate.dagger())).collect() }
    }

    pub fn has_two_qubit_gate(&self) -> bool {
        self.blocks.iter().any(|b| b.qubits.len() == 2)
    }
}

/// `C = U_d ⋯ U_1` on `n` qubits. `groups[k]` tags strict layer `k` with the
/// composite layer it belongs to, for reporting only.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredCircuit {
    n: usize,
    layers: Vec<Layer>,
    groups: Vec<usize>,
}

impl LayeredCircuit {
    pub fn new(n: usize, layers: Vec<Layer>) -> Result<LayeredCircuit, CircuitError> {
        let groups = (0..layers.len()).collect();
        LayeredCircuit::with_groups(n, layers, groups)
    }

    /// Groups must start at 0 and either repeat or increase by one.
    pub fn with_groups(n: usize, layers: Vec<Layer>, groups: Vec<usize>) -> Result<LayeredCircuit, CircuitError> {
        if n == 0 {
            return Err(CircuitError::InvalidPartition("circuit needs at least one qubit".into()));
        }
        if groups.len() != layers.len() {
            return Err(CircuitError::InvalidGrouping(format!("{} groups for {} layers", groups.len(), layers.len())));
        }
        let mut prev: Option<usize> = None;
        for &g in &groups {
            let ok = match prev {
                None => g == 0,
                Some(p) => g == p || g == p + 1,
            };
            if !ok {
                return Err(CircuitError::InvalidGrouping(format!("group sequence {groups:?}")));
            }
            prev = Some(g);
        }
        for (k, l) in layers.iter().enumerate() {
            if l.n_qubits() != n {
                return Err(CircuitError::InvalidPartition(format!(
                    "layer {} covers {} qubits, expected {n}",
                    k + 1,
                    l.n_qubits()
                )));
            }
        }
        Ok(LayeredCircuit { n, layers, groups })
    }

    pub fn empty(n: usize) -> LayeredCircuit {
        LayeredCircuit { n, layers: Vec::new(), groups: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn n_groups(&self) -> usize {
        self.groups.last().map_or(0, |g| g + 1)
    }

    /// Appends a layer as its own group.
    pub fn push(&mut self, layer: Layer) -> Result<(), CircuitError> {
        if layer.n_qubits() != self.n {
            return Err(CircuitError::InvalidPartition(format!(
                "layer covers {} qubits, expected {}",
                layer.n_qubits(),
                self.n
            )));
        }
        self.groups.push(self.n_groups());
        self.layers.push(layer);
        Ok(())
    }

    /// `C†`: reversed order, every gate daggered.
    pub fn inverse(&self) -> LayeredCircuit {
        let layers: Vec<Layer> = self.layers.iter().rev().map(Layer::dagger).collect();
        let groups = (0..layers.len()).collect();
        LayeredCircuit { n: self.n, layers, groups }
    }

    /// Same layers with the grouping replaced.
    pub fn regrouped(&self, groups: Vec<usize>) -> Result<LayeredCircuit, CircuitError> {
        LayeredCircuit::with_groups(self.n, self.layers.clone(), groups)
    }
}

/// Full-register matrix of `u` acting on the ordered `targets` of `n` qubits.
pub fn embed(u: &CMatrix, targets: &[usize], n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut v = StateVec::basis(n, col).expect("column index in range");
        v.apply_unchecked(u, targets);
        for (row, a) in v.amplitudes().iter().enumerate() {
            out[(row, col)] = *a;
        }
    }
    out
}

/// `⊗_s g_s` embedded on `n` qubits.
pub fn layer_unitary(layer: &Layer, n: usize) -> Result<CMatrix, CircuitError> {
    if layer.n_qubits() != n {
        return Err(CircuitError::InvalidPartition(format!("layer covers {} qubits, expected {n}", layer.n_qubits())));
    }
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut v = StateVec::basis(n, col).expect("column index in range");
        for b in layer.blocks() {
            v.apply_unchecked(b.gate.matrix(), &b.qubits);
        }
        for (row, a) in v.amplitudes().iter().enumerate() {
            out[(row, col)] = *a;
        }
    }
    Ok(out)
}

/// `U_k ⋯ U_1`; `k = 0` gives the identity.
pub fn compose_unitary(c: &LayeredCircuit, k: usize) -> Result<CMatrix, CircuitError> {
    if k > c.depth() {
        return Err(CircuitError::LayerOutOfRange { k, d: c.depth() });
    }
    let dim = 1usize << c.n();
    let mut u = CMatrix::identity(dim, dim);
    for layer in &c.layers()[..k] {
        u = layer_unitary(layer, c.n())? * u;
    }
    Ok(u)
}

/// Applies the gates of `layer` to `state` in place.
pub fn apply_layer(state: &mut StateVec, layer: &Layer) {
    for b in layer.blocks() {
        state.apply_unchecked(b.gate.matrix(), &b.qubits);
    }
}
