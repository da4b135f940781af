use super::linalg::{
    c64, hermitian_eigen, hermitian_eigenvalues, hs_inner, is_hermitian, is_power_of_two_dim, trace,
    trace_norm_hermitian, CMatrix, EIGEN_TOL, MATRIX_TOL,
};
use super::state::{gather_bits, validate_targets};
use super::QcoreError;

/// Square complex matrix of dimension `2^n_qubits`.
///
/// Matrices built from physical states are Hermitian with unit trace. Raw
/// tomography estimates are stored in the same type and may have negative
/// eigenvalues; [`DensityMatrix::is_psd`] reports that.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor: square, power-of-two dimension, Hermitian.
    pub fn new(matrix: CMatrix) -> Result<Self, QcoreError> {
        if !matrix.is_square() {
            return Err(QcoreError::DimensionMismatch { expected: matrix.nrows(), actual: matrix.ncols() });
        }
        let n_qubits = is_power_of_two_dim(matrix.nrows()).ok_or(QcoreError::NotPowerOfTwo(matrix.nrows()))?;
        if !is_hermitian(&matrix, MATRIX_TOL) {
            return Err(QcoreError::NonHermitian);
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Skips validation; the dimension must still be a power of two.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, matrix: CMatrix::identity(dim, dim).map(|z| z / dim as f64) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn is_psd(&self) -> bool {
        self.eigenvalues().first().is_none_or(|&v| v >= -EIGEN_TOL)
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_matrix_unchecked(self.matrix.kronecker(&other.matrix))
    }

    /// Conjugation `u ρ u†` by a full-register matrix.
    pub fn conjugate(&self, u: &CMatrix) -> DensityMatrix {
        Self::from_matrix_unchecked(u * &self.matrix * u.adjoint())
    }

    /// Clips negative eigenvalues to zero and renormalizes the trace to one.
    /// Falls back to the maximally mixed state if nothing positive survives.
    pub fn clip_to_physical(&self) -> DensityMatrix {
        let (vals, vecs) = hermitian_eigen(&self.matrix);
        let clipped: Vec<f64> = vals.iter().map(|&v| if v > 0.0 { v } else { 0.0 }).collect();
        let total: f64 = clipped.iter().sum();
        if total <= EIGEN_TOL {
            return Self::maximally_mixed(self.n_qubits);
        }
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for (k, &v) in clipped.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let col = vecs.column(k);
            out += (col * col.adjoint()).map(|z| z * (v / total));
        }
        Self::from_matrix_unchecked(super::linalg::hermitize(&out))
    }
}

/// Reduced matrix on `keep`, in the order given.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, QcoreError> {
    if keep.is_empty() {
        return Err(QcoreError::EmptyKeepSet);
    }
    let n = rho.n_qubits();
    validate_targets(n, keep)?;
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let kd = 1usize << keep.len();
    let rd = 1usize << rest.len();
    // compose[(k, r)] = full index with kept bits k and traced bits r
    let mut compose = vec![0usize; kd * rd];
    for idx in 0..(1usize << n) {
        let k = gather_bits(idx, n, keep);
        let r = gather_bits(idx, n, &rest);
        compose[k * rd + r] = idx;
    }
    let m = rho.matrix();
    let mut out = CMatrix::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            let mut acc = c64(0.0, 0.0);
            for r in 0..rd {
                acc += m[(compose[a * rd + r], compose[b * rd + r])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// `½ Σ|λ_i(a − b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QcoreError> {
    if a.dim() != b.dim() {
        return Err(QcoreError::DimensionMismatch { expected: a.dim(), actual: b.dim() });
    }
    Ok(0.5 * trace_norm_hermitian(&(a.matrix() - b.matrix())))
}

/// `tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> Result<f64, QcoreError> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > MATRIX_TOL {
        return Err(QcoreError::NotNormalized(tr));
    }
    Ok(hs_inner(rho.matrix(), rho.matrix()).re)
}

/// `tr(ρρ′) / √(tr(ρ²) tr(ρ′²))`, capped at its Cauchy–Schwarz bound 1 so
/// rounding never reports more than perfect agreement.
pub fn relative_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QcoreError> {
    if a.dim() != b.dim() {
        return Err(QcoreError::DimensionMismatch { expected: a.dim(), actual: b.dim() });
    }
    let aa = hs_inner(a.matrix(), a.matrix()).re;
    let bb = hs_inner(b.matrix(), b.matrix()).re;
    if aa <= f64::MIN_POSITIVE || bb <= f64::MIN_POSITIVE {
        return Err(QcoreError::ZeroPurity);
    }
    Ok((hs_inner(a.matrix(), b.matrix()).re / (aa * bb).sqrt()).min(1.0))
}
