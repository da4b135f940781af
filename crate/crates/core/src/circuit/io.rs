//! JSON circuit files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "gate_set": {
//!     "singles": [{"name": "H"}, {"name": "V", "matrix": [[0.5, 0.5], [0.5, -0.5], [0.5, -0.5], [0.5, 0.5]]}],
//!     "doubles": [{"name": "CNOT"}]
//!   },
//!   "layers": [
//!     [{"gate": "H", "qubits": [0]}, {"gate": "H", "qubits": [1]}],
//!     [[{"gate": "V", "qubits": [0]}], [{"gate": "CNOT", "qubits": [1, 0]}]]
//!   ]
//! }
//! ```
//!
//! Matrices are flat, row-major lists of `[re, im]` pairs and may be omitted
//! for built-in gate names. A layer is either a list of placements (one strict
//! layer) or a list of such lists, which is read as consecutive strict layers
//! grouped into one composite layer. Qubits left idle in a strict layer are
//! filled with the gate named `I`, which must then be in the gate set.

use serde::{Deserialize, Serialize};

use crate::qcore::{c64, CMatrix};

use super::{Block, CircuitError, Gate, GateSet, Layer, LayeredCircuit};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateSpec {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateSetSpec {
    #[serde(default)]
    singles: Vec<GateSpec>,
    #[serde(default)]
    doubles: Vec<GateSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Placement {
    gate: String,
    qubits: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum LayerSpec {
    Strict(Vec<Placement>),
    Composite(Vec<Vec<Placement>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CircuitSpec {
    n: usize,
    gate_set: GateSetSpec,
    layers: Vec<LayerSpec>,
}

/// A parsed circuit file: the circuit and the gate set it declares.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDocument {
    pub circuit: LayeredCircuit,
    pub gate_set: GateSet,
}

fn syntax(e: serde_json::Error) -> CircuitError {
    CircuitError::SyntaxError { line: e.line(), column: e.column(), message: e.to_string() }
}

fn gate_from_spec(spec: &GateSpec) -> Result<Gate, CircuitError> {
    match &spec.matrix {
        None => Gate::builtin(&spec.name).ok_or_else(|| CircuitError::UnknownGateName(spec.name.clone())),
        Some(entries) => {
            let dim = match entries.len() {
                4 => 2,
                16 => 4,
                other => {
                    return Err(CircuitError::ArityMismatch { gate: spec.name.clone(), expected: 0, actual: other })
                }
            };
            let vals: Vec<_> = entries.iter().map(|[re, im]| c64(*re, *im)).collect();
            Gate::new(spec.name.clone(), CMatrix::from_row_slice(dim, dim, &vals))
        }
    }
}

fn gate_to_spec(g: &Gate) -> GateSpec {
    let matrix = if g.is_builtin() {
        None
    } else {
        let m = g.matrix();
        let mut flat = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                flat.push([m[(r, c)].re, m[(r, c)].im]);
            }
        }
        Some(flat)
    };
    GateSpec { name: g.name().to_string(), matrix }
}

fn gate_set_from_spec(spec: &GateSetSpec) -> Result<GateSet, CircuitError> {
    let singles = spec.singles.iter().map(gate_from_spec).collect::<Result<Vec<_>, _>>()?;
    let doubles = spec.doubles.iter().map(gate_from_spec).collect::<Result<Vec<_>, _>>()?;
    GateSet::new(singles, doubles)
}

fn gate_set_to_spec(gs: &GateSet) -> GateSetSpec {
    GateSetSpec {
        singles: gs.singles().iter().map(gate_to_spec).collect(),
        doubles: gs.doubles().iter().map(gate_to_spec).collect(),
    }
}

fn build_layer(n: usize, placements: &[Placement], gs: &GateSet, layer_no: usize) -> Result<Layer, CircuitError> {
    let mut blocks = Vec::with_capacity(n);
    let mut covered = vec![false; n];
    for p in placements {
        let gate = gs.find(&p.gate).ok_or_else(|| CircuitError::UnknownGateName(p.gate.clone()))?;
        for &q in &p.qubits {
            if q < n {
                if covered[q] {
                    return Err(CircuitError::InvalidPartition(format!(
                        "layer {layer_no}: qubit {q} appears in two blocks"
                    )));
                }
                covered[q] = true;
            }
        }
        blocks.push(Block::new(p.qubits.clone(), gate.clone()));
    }
    for (q, c) in covered.iter().enumerate() {
        if !c {
            let id = gs.identity().ok_or(CircuitError::IdleQubit { layer: layer_no, qubit: q })?;
            blocks.push(Block::single(q, id.clone()));
        }
    }
    Layer::new(n, blocks)
}

/// Parses a circuit file.
pub fn parse_circuit(text: &str) -> Result<CircuitDocument, CircuitError> {
    let spec: CircuitSpec = serde_json::from_str(text).map_err(syntax)?;
    let gate_set = gate_set_from_spec(&spec.gate_set)?;
    let mut layers = Vec::new();
    let mut groups = Vec::new();
    for (g, ls) in spec.layers.iter().enumerate() {
        let rounds: Vec<&[Placement]> = match ls {
            LayerSpec::Strict(p) => vec![p.as_slice()],
            LayerSpec::Composite(rs) => rs.iter().map(Vec::as_slice).collect(),
        };
        if rounds.is_empty() {
            return Err(CircuitError::InvalidGrouping(format!("composite layer {} has no rounds", g + 1)));
        }
        for r in rounds {
            layers.push(build_layer(spec.n, r, &gate_set, layers.len() + 1)?);
            groups.push(g);
        }
    }
    let circuit = LayeredCircuit::with_groups(spec.n, layers, groups)?;
    Ok(CircuitDocument { circuit, gate_set })
}

/// Serializes a circuit with explicit identity blocks, nesting groups of more
/// than one strict layer.
pub fn emit_circuit(c: &LayeredCircuit, gs: &GateSet) -> String {
    serde_json::to_string_pretty(&circuit_to_value(c, gs)).expect("circuit spec serializes")
}

pub fn circuit_to_value(c: &LayeredCircuit, gs: &GateSet) -> serde_json::Value {
    let placements = |l: &Layer| -> Vec<Placement> {
        l.blocks().iter().map(|b| Placement { gate: b.gate.name().to_string(), qubits: b.qubits.clone() }).collect()
    };
    let mut layers = Vec::new();
    let mut k = 0;
    while k < c.depth() {
        let g = c.groups()[k];
        let end = (k..c.depth()).find(|&j| c.groups()[j] != g).unwrap_or(c.depth());
        if end - k == 1 {
            layers.push(LayerSpec::Strict(placements(&c.layers()[k])));
        } else {
            layers.push(LayerSpec::Composite(c.layers()[k..end].iter().map(placements).collect()));
        }
        k = end;
    }
    let spec = CircuitSpec { n: c.n(), gate_set: gate_set_to_spec(gs), layers };
    serde_json::to_value(spec).expect("circuit spec serializes")
}

/// Parses a standalone gate-set file `{"singles": [...], "doubles": [...]}`.
pub fn parse_gate_set(text: &str) -> Result<GateSet, CircuitError> {
    let spec: GateSetSpec = serde_json::from_str(text).map_err(syntax)?;
    gate_set_from_spec(&spec)
}

pub fn emit_gate_set(gs: &GateSet) -> String {
    serde_json::to_string_pretty(&gate_set_to_spec(gs)).expect("gate set serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_A: &str = r#"{
        "n": 2,
        "gate_set": {"singles": [{"name": "I"}, {"name": "H"}], "doubles": [{"name": "CNOT"}]},
        "layers": [
            [{"gate": "H", "qubits": [0]}, {"gate": "H", "qubits": [1]}],
            [{"gate": "CNOT", "qubits": [0, 1]}]
        ]
    }"#;

    #[test]
    fn parses_two_layer_circuit() {
        let doc = parse_circuit(FIG_A).unwrap();
        assert_eq!(doc.circuit.n(), 2);
        assert_eq!(doc.circuit.depth(), 2);
        assert_eq!(doc.circuit.layers()[1].structure(), vec![vec![0, 1]]);
    }

    #[test]
    fn roundtrip_with_composite_and_custom_gate() {
        let text = r#"{
            "n": 3,
            "gate_set": {"singles": [{"name": "I"}, {"name": "V", "matrix": [[0.5,0.5],[0.5,-0.5],[0.5,-0.5],[0.5,0.5]]}],
                         "doubles": [{"name": "CNOT"}]},
            "layers": [
                [[{"gate": "V", "qubits": [2]}], [{"gate": "CNOT", "qubits": [2, 0]}]],
                []
            ]
        }"#;
        let doc = parse_circuit(text).unwrap();
        assert_eq!(doc.circuit.depth(), 3);
        assert_eq!(doc.circuit.groups(), &[0, 0, 1]);
        let again = parse_circuit(&emit_circuit(&doc.circuit, &doc.gate_set)).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn overlapping_blocks_rejected() {
        let text = r#"{"n": 2, "gate_set": {"singles": [{"name": "H"}], "doubles": [{"name": "CNOT"}]},
            "layers": [[{"gate": "CNOT", "qubits": [0, 1]}, {"gate": "H", "qubits": [1]}]]}"#;
        assert!(matches!(parse_circuit(text), Err(CircuitError::InvalidPartition(_))));
    }

    #[test]
    fn idle_qubit_needs_identity() {
        let text = r#"{"n": 2, "gate_set": {"singles": [{"name": "H"}]}, "layers": [[{"gate": "H", "qubits": [0]}]]}"#;
        assert_eq!(parse_circuit(text), Err(CircuitError::IdleQubit { layer: 1, qubit: 1 }));
    }

    #[test]
    fn unknown_gate_and_syntax_errors() {
        let text = r#"{"n": 1, "gate_set": {"singles": [{"name": "H"}]}, "layers": [[{"gate": "Q", "qubits": [0]}]]}"#;
        assert_eq!(parse_circuit(text), Err(CircuitError::UnknownGateName("Q".into())));
        let text = r#"{"n": 1, "gate_set": {"singles": [{"name": "Q"}]}, "layers": []}"#;
        assert_eq!(parse_circuit(text), Err(CircuitError::UnknownGateName("Q".into())));
        match parse_circuit("{\n  \"n\": 1,\n  oops\n}") {
            Err(CircuitError::SyntaxError { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gate_set_roundtrip() {
        let gs = GateSet::from_builtin_names(&["I", "H", "CNOT"]).unwrap();
        assert_eq!(parse_gate_set(&emit_gate_set(&gs)).unwrap(), gs);
    }
}
