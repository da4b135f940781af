//! Small dense complex linear algebra helpers.
//!
//! Every matrix in the pipeline is at most 64×64 (a 6-qubit oracle state), so
//! everything here is plain dense arithmetic on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance used for unitarity and Hermiticity checks.
pub const MATRIX_TOL: f64 = 1e-9;

/// Eigenvalues with magnitude below this are treated as zero.
pub const EIGEN_TOL: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a sequence of matrices, left factor most significant.
pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors.into_iter().fold(identity(1), |acc, f| acc.kronecker(f))
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    if !u.is_square() {
        return false;
    }
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &identity(u.nrows())) <= tol
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && max_abs_diff(a, &a.adjoint()) <= tol
}

/// Symmetrize a nearly Hermitian matrix to exactly `(a + a†)/2`.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).map(|z| z * 0.5)
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitize(a).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|x, y| x.total_cmp(y));
    vals
}

/// Eigen-decomposition of a Hermitian matrix: `(eigenvalues, eigenvectors as columns)`.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(a).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Trace norm `Σ|λ|` of a Hermitian matrix.
pub fn trace_norm_hermitian(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).iter().map(|v| v.abs()).sum()
}

/// Operator (spectral) norm of a Hermitian matrix.
pub fn operator_norm_hermitian(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a).iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// `Σ_ij a_ij * conj(b_ij)` which equals `tr(a b†)`; for Hermitian `b` this is `tr(a b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

pub fn is_power_of_two_dim(dim: usize) -> Option<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        None
    } else {
        Some(dim.trailing_zeros() as usize)
    }
}

/// The SWAP gate on two qubits.
pub fn swap_matrix() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = c64(1.0, 0.0);
    m[(1, 2)] = c64(1.0, 0.0);
    m[(2, 1)] = c64(1.0, 0.0);
    m[(3, 3)] = c64(1.0, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&identity(2), &identity(4));
        assert!(max_abs_diff(&k, &identity(8)) < 1e-15);
    }

    #[test]
    fn eigenvalues_of_pauli_x() {
        let x = CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]);
        let vals = hermitian_eigenvalues(&x);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((trace_norm_hermitian(&x) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn swap_is_unitary_and_involutive() {
        let s = swap_matrix();
        assert!(is_unitary(&s, MATRIX_TOL));
        assert!(max_abs_diff(&(&s * &s), &identity(4)) < 1e-15);
    }
}
