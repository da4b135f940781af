use super::linalg::{c64, is_power_of_two_dim, is_unitary, CMatrix, C64, MATRIX_TOL};
use super::{DensityMatrix, QcoreError};

/// Dense pure state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVec {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVec {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = c64(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    /// Computational basis state with the given label.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, QcoreError> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QcoreError::DimensionMismatch { expected: dim, actual: index });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = c64(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps amplitudes after checking the length and the norm.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self, QcoreError> {
        let n_qubits = is_power_of_two_dim(amplitudes.len()).ok_or(QcoreError::NotPowerOfTwo(amplitudes.len()))?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > MATRIX_TOL {
            return Err(QcoreError::NotNormalizedState(norm2));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self, QcoreError> {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(QcoreError::NotNormalizedState(norm2));
        }
        let scale = 1.0 / norm2.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Self::from_amplitudes(amplitudes)
    }

    /// Tensor product of single-qubit states, first factor is qubit 0.
    pub fn product(factors: &[[C64; 2]]) -> Self {
        let mut amplitudes = vec![c64(1.0, 0.0)];
        for f in factors {
            let mut next = Vec::with_capacity(amplitudes.len() * 2);
            for a in &amplitudes {
                next.push(a * f[0]);
                next.push(a * f[1]);
            }
            amplitudes = next;
        }
        Self { n_qubits: factors.len(), amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVec) -> C64 {
        self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        DensityMatrix::from_matrix_unchecked(&v * v.adjoint())
    }

    /// Reduced density matrix on `keep` (in the given order), computed directly
    /// from the amplitudes without forming the full projector.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, QcoreError> {
        validate_targets(self.n_qubits, keep)?;
        if keep.is_empty() {
            return Err(QcoreError::EmptyKeepSet);
        }
        let n = self.n_qubits;
        let k = keep.len();
        let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let mut coeffs = CMatrix::zeros(1 << k, 1 << rest.len());
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let ki = gather_bits(idx, n, keep);
            let ri = gather_bits(idx, n, &rest);
            coeffs[(ki, ri)] = *amp;
        }
        Ok(DensityMatrix::from_matrix_unchecked(&coeffs * coeffs.adjoint()))
    }

    /// Applies `u` to `targets` without validating unitarity. Callers that
    /// already trust the matrix (gate tables, compiled layers) use this in
    /// inner loops.
    pub fn apply_unchecked(&mut self, u: &CMatrix, targets: &[usize]) {
        let n = self.n_qubits;
        let k = targets.len();
        let sub = 1usize << k;
        let masks: Vec<usize> = targets.iter().map(|&q| 1usize << (n - 1 - q)).collect();
        let target_mask = masks.iter().fold(0, |acc, m| acc | m);
        let offsets: Vec<usize> = (0..sub)
            .map(|s| {
                masks.iter().enumerate().filter(|(b, _)| (s >> (k - 1 - b)) & 1 == 1).fold(0, |acc, (_, m)| acc | m)
            })
            .collect();
        let mut buf = vec![C64::new(0.0, 0.0); sub];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 {
                continue;
            }
            for (s, off) in offsets.iter().enumerate() {
                buf[s] = self.amplitudes[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (c, b) in buf.iter().enumerate() {
                    acc += u[(r, c)] * b;
                }
                self.amplitudes[base | off] = acc;
            }
        }
    }

    /// Full-register matrix-vector product.
    pub fn apply_full_unchecked(&mut self, u: &CMatrix) {
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        let out = u * v;
        self.amplitudes.copy_from_slice(out.as_slice());
    }

    /// Born probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Index of the sub-register `qubits` (first listed is most significant)
/// inside the full basis label `idx` on `n` qubits.
pub(crate) fn gather_bits(idx: usize, n: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1))
}

pub(crate) fn validate_targets(n_qubits: usize, targets: &[usize]) -> Result<(), QcoreError> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(QcoreError::IndexOutOfRange { index: t, n_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(QcoreError::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Applies the unitary `u` to the ordered `targets` of `state`. The first
/// target is the most significant qubit of `u`'s index.
pub fn apply_unitary(state: &StateVec, u: &CMatrix, targets: &[usize]) -> Result<StateVec, QcoreError> {
    validate_targets(state.n_qubits(), targets)?;
    let dim = 1usize << targets.len();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(QcoreError::DimensionMismatch { expected: dim, actual: u.nrows() });
    }
    if !is_unitary(u, MATRIX_TOL) {
        return Err(QcoreError::NonUnitary);
    }
    let mut out = state.clone();
    out.apply_unchecked(u, targets);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::max_abs_diff;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h() -> CMatrix {
        let s = FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[c64(s, 0.), c64(s, 0.), c64(s, 0.), c64(-s, 0.)])
    }

    fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
    }

    fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c64(1., 0.);
        m[(1, 1)] = c64(1., 0.);
        m[(2, 3)] = c64(1., 0.);
        m[(3, 2)] = c64(1., 0.);
        m
    }

    #[test]
    fn hadamard_on_zero() {
        let out = apply_unitary(&StateVec::zero(1), &h(), &[0]).unwrap();
        assert!((out.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cnot_on_10_gives_11() {
        let s = StateVec::basis(2, 0b10).unwrap();
        let out = apply_unitary(&s, &cnot(), &[0, 1]).unwrap();
        assert_eq!(out, StateVec::basis(2, 0b11).unwrap());
    }

    #[test]
    fn cnot_reversed_targets() {
        // control on qubit 1, target qubit 0: |01⟩ → |11⟩
        let s = StateVec::basis(2, 0b01).unwrap();
        let out = apply_unitary(&s, &cnot(), &[1, 0]).unwrap();
        assert_eq!(out, StateVec::basis(2, 0b11).unwrap());
    }

    #[test]
    fn x_on_qubit_one() {
        let out = apply_unitary(&StateVec::zero(2), &x(), &[1]).unwrap();
        assert_eq!(out, StateVec::basis(2, 0b01).unwrap());
    }

    #[test]
    fn errors() {
        let s = StateVec::zero(2);
        assert_eq!(apply_unitary(&s, &x(), &[2]), Err(QcoreError::IndexOutOfRange { index: 2, n_qubits: 2 }));
        assert_eq!(apply_unitary(&s, &cnot(), &[1, 1]), Err(QcoreError::DuplicateTarget(1)));
        let bad = CMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(1., 0.), c64(0., 0.), c64(1., 0.)]);
        assert_eq!(apply_unitary(&s, &bad, &[0]), Err(QcoreError::NonUnitary));
        assert!(matches!(apply_unitary(&s, &cnot(), &[0]), Err(QcoreError::DimensionMismatch { .. })));
    }

    #[test]
    fn reduced_density_matches_partial_trace() {
        let s = StateVec::normalized(vec![c64(0.3, 0.1), c64(-0.2, 0.5), c64(0.7, 0.0), c64(0.1, -0.4)]).unwrap();
        let full = s.density();
        for keep in [[0usize], [1]] {
            let a = s.reduced_density(&keep).unwrap();
            let b = crate::qcore::partial_trace(&full, &keep).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-14);
        }
    }
}
