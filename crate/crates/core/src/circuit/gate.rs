use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::qcore::{c64, is_unitary, max_abs_diff, swap_matrix, CMatrix, MATRIX_TOL};

use super::CircuitError;

/// Names accepted without an explicit matrix in circuit and gate-set files.
pub const BUILTIN_GATES: [&str; 10] = ["I", "H", "X", "Y", "Z", "S", "T", "Rz(pi/4)", "Rz(pi/2)", "CNOT"];

const DAGGER: char = '†';

/// A named one- or two-qubit unitary.
#[derive(Debug, Clone)]
pub struct Gate {
    name: String,
    matrix: CMatrix,
}

impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && max_abs_diff(&self.matrix, &other.matrix) <= MATRIX_TOL
    }
}

/// `diag(e^{-iθ/2}, e^{iθ/2})`.
pub fn rz(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_row_slice(2, 2, &[c64(c, -s), c64(0., 0.), c64(0., 0.), c64(c, s)])
}

fn builtin_matrix(name: &str) -> Option<CMatrix> {
    let o = c64(0., 0.);
    let l = c64(1., 0.);
    let h = FRAC_1_SQRT_2;
    let m = match name {
        "I" => CMatrix::identity(2, 2),
        "H" => CMatrix::from_row_slice(2, 2, &[c64(h, 0.), c64(h, 0.), c64(h, 0.), c64(-h, 0.)]),
        "X" => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        "Y" => CMatrix::from_row_slice(2, 2, &[o, c64(0., -1.), c64(0., 1.), o]),
        "Z" => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        "S" => CMatrix::from_row_slice(2, 2, &[l, o, o, c64(0., 1.)]),
        "T" => CMatrix::from_row_slice(2, 2, &[l, o, o, c64(h, h)]),
        "Rz(pi/4)" => rz(FRAC_PI_4),
        "Rz(pi/2)" => rz(2.0 * FRAC_PI_4),
        "CNOT" => CMatrix::from_row_slice(4, 4, &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o]),
        _ => return None,
    };
    Some(m)
}

impl Gate {
    /// Validates dimension (2×2 or 4×4) and unitarity.
    pub fn new(name: impl Into<String>, matrix: CMatrix) -> Result<Gate, CircuitError> {
        let name = name.into();
        if !(matrix.is_square() && (matrix.nrows() == 2 || matrix.nrows() == 4)) {
            return Err(CircuitError::ArityMismatch { gate: name, expected: 0, actual: matrix.nrows() });
        }
        if !is_unitary(&matrix, MATRIX_TOL) {
            return Err(CircuitError::NonUnitary(name));
        }
        Ok(Gate { name, matrix })
    }

    /// Built-in gate by name; `CNOT` has its control on the first qubit.
    pub fn builtin(name: &str) -> Option<Gate> {
        builtin_matrix(name).map(|matrix| Gate { name: name.to_string(), matrix })
    }

    pub fn is_builtin(&self) -> bool {
        builtin_matrix(&self.name).is_some_and(|m| max_abs_diff(&m, &self.matrix) <= MATRIX_TOL)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        if self.matrix.nrows() == 2 {
            1
        } else {
            2
        }
    }

    /// Inverse gate; the name gains (or loses) a trailing `†`.
    pub fn dagger(&self) -> Gate {
        let name = match self.name.strip_suffix(DAGGER) {
            Some(base) => base.to_string(),
            None => format!("{}{DAGGER}", self.name),
        };
        Gate { name, matrix: self.matrix.adjoint() }
    }

    /// Same gate with its two qubits exchanged, `SWAP·g·SWAP`.
    pub fn reversed_matrix(&self) -> CMatrix {
        let s = swap_matrix();
        &s * &self.matrix * &s
    }

    /// True when the matrix is a global phase times the identity.
    pub fn is_identity_up_to_phase(&self) -> bool {
        let phase = self.matrix[(0, 0)];
        let dim = self.matrix.nrows();
        (phase.norm() - 1.0).abs() <= MATRIX_TOL
            && max_abs_diff(&self.matrix, &CMatrix::identity(dim, dim).map(|z| z * phase)) <= MATRIX_TOL
    }
}
