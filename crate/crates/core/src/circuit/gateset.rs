use std::fmt;

use crate::qcore::MATRIX_TOL;

use super::choi::choi_state_unchecked;
use super::{CircuitError, Gate};

/// A two-qubit gate of the set placed in one of its two orientations. `reversed`
/// means the gate's first qubit is the second qubit of the pair it is laid on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedGate {
    pub index: usize,
    pub reversed: bool,
}

/// Finite gate set `G1 ∪ G2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSet {
    singles: Vec<Gate>,
    doubles: Vec<Gate>,
    symmetric: Vec<bool>,
}

impl GateSet {
    pub fn new(singles: Vec<Gate>, doubles: Vec<Gate>) -> Result<GateSet, CircuitError> {
        if singles.is_empty() && doubles.is_empty() {
            return Err(CircuitError::EmptyGateSet);
        }
        for g in &singles {
            if g.arity() != 1 {
                return Err(CircuitError::ArityMismatch { gate: g.name().into(), expected: 1, actual: g.arity() });
            }
        }
        for g in &doubles {
            if g.arity() != 2 {
                return Err(CircuitError::ArityMismatch { gate: g.name().into(), expected: 2, actual: g.arity() });
            }
        }
        let all: Vec<&Gate> = singles.iter().chain(doubles.iter()).collect();
        for (i, g) in all.iter().enumerate() {
            if all[..i].iter().any(|h| h.name() == g.name()) {
                return Err(CircuitError::DuplicateGateName(g.name().into()));
            }
        }
        let symmetric = doubles
            .iter()
            .map(|g| {
                let fwd = choi_state_unchecked(g.matrix(), 2);
                let rev = choi_state_unchecked(&g.reversed_matrix(), 2);
                // Choi states are compared up to global phase
                (fwd.inner(&rev).norm() - 1.0).abs() <= MATRIX_TOL
            })
            .collect();
        Ok(GateSet { singles, doubles, symmetric })
    }

    /// Built-in gates by name, split automatically by arity.
    pub fn from_builtin_names(names: &[&str]) -> Result<GateSet, CircuitError> {
        let mut singles = Vec::new();
        let mut doubles = Vec::new();
        for name in names {
            let g = Gate::builtin(name).ok_or_else(|| CircuitError::UnknownGateName(name.to_string()))?;
            if g.arity() == 1 {
                singles.push(g);
            } else {
                doubles.push(g);
            }
        }
        GateSet::new(singles, doubles)
    }

    pub fn singles(&self) -> &[Gate] {
        &self.singles
    }

    pub fn doubles(&self) -> &[Gate] {
        &self.doubles
    }

    pub fn is_symmetric(&self, index: usize) -> bool {
        self.symmetric[index]
    }

    /// Every distinct directed placement of the two-qubit gates. Gates whose
    /// reversal has the same Choi state appear once.
    pub fn directed_doubles(&self) -> Vec<DirectedGate> {
        let mut out = Vec::new();
        for index in 0..self.doubles.len() {
            out.push(DirectedGate { index, reversed: false });
            if !self.symmetric[index] {
                out.push(DirectedGate { index, reversed: true });
            }
        }
        out
    }

    pub fn find(&self, name: &str) -> Option<&Gate> {
        self.singles.iter().chain(self.doubles.iter()).find(|g| g.name() == name)
    }

    pub fn identity(&self) -> Option<&Gate> {
        self.singles.iter().find(|g| g.name() == "I")
    }

    pub fn directed_label(&self, dg: DirectedGate) -> String {
        DirectedLabel {
            name: self.doubles[dg.index].name(),
            reversed: dg.reversed,
            symmetric: self.symmetric[dg.index],
        }
        .to_string()
    }

    /// Matrix of a directed placement in window order (first window qubit is
    /// the most significant).
    pub fn directed_matrix(&self, dg: DirectedGate) -> crate::qcore::CMatrix {
        let g = &self.doubles[dg.index];
        if dg.reversed {
            g.reversed_matrix()
        } else {
            g.matrix().clone()
        }
    }
}

struct DirectedLabel<'a> {
    name: &'a str,
    reversed: bool,
    symmetric: bool,
}

impl fmt::Display for DirectedLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.symmetric, self.reversed) {
            (true, _) => write!(f, "{}", self.name),
            (false, false) => write!(f, "{}(0→1)", self.name),
            (false, true) => write!(f, "{}(1→0)", self.name),
        }
    }
}
