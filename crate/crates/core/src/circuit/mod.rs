//! Gate sets, layered circuits, Choi states, configuration classes and the
//! gate-set resolution `d_C`, plus the JSON circuit format.

mod choi;
mod gate;
mod gateset;
mod io;
mod layer;
mod random;

use thiserror::Error;

use crate::qcore::QcoreError;

pub use choi::{
    choi_density, choi_state, enumerate_config_classes, gate_set_resolution, raw_config_elements, resolution_report,
    ConfigClass, ConfigElement, ConfigSource, Resolution, ResolutionReport, DUPLICATE_TOL,
};
pub use gate::{rz, Gate, BUILTIN_GATES};
pub use gateset::{DirectedGate, GateSet};
pub use io::{circuit_to_value, emit_circuit, emit_gate_set, parse_circuit, parse_gate_set, CircuitDocument};
pub use layer::{apply_layer, compose_unitary, embed, layer_unitary, Block, Layer, LayeredCircuit};
pub use random::{random_circuit, random_layer};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error("gate set is empty")]
    EmptyGateSet,
    #[error("gate name {0:?} is used twice")]
    DuplicateGateName(String),
    #[error("gate {gate:?}: expected arity/size {expected}, got {actual}")]
    ArityMismatch { gate: String, expected: usize, actual: usize },
    #[error("gate {0:?} is not unitary")]
    NonUnitary(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid layer grouping: {0}")]
    InvalidGrouping(String),
    #[error("layer {layer}: qubit {qubit} is idle and the gate set has no I")]
    IdleQubit { layer: usize, qubit: usize },
    #[error("unknown gate name {0:?}")]
    UnknownGateName(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("layer index {k} out of range for depth {d}")]
    LayerOutOfRange { k: usize, d: usize },
    #[error("degenerate gate set: {first} and {second} give identical states")]
    DegenerateGateSet { first: String, second: String },
}
