use rand::Rng;
use rand_distr::StandardNormal;

use crate::qcore::{c64, operator_norm_hermitian, CMatrix, DensityMatrix};

/// `5^γ · 1e-4`, or 0 for `γ = 0`.
pub fn rdm_noise_scale(gamma: u8) -> f64 {
    if gamma == 0 {
        0.0
    } else {
        5f64.powi(gamma as i32) * 1e-4
    }
}

/// Adds `s · H / ‖H‖` to `rho`, where `H = (A + A†)/2` for a matrix `A` of
/// i.i.d. standard complex Gaussian entries and `s` = [`rdm_noise_scale`].
/// Neither trace nor positivity is preserved.
pub fn perturb_rdm<R: Rng + ?Sized>(rho: &DensityMatrix, gamma: u8, rng: &mut R) -> DensityMatrix {
    let s = rdm_noise_scale(gamma);
    if s == 0.0 {
        return rho.clone();
    }
    let d = rho.dim();
    let a = CMatrix::from_fn(d, d, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let h = (&a + a.adjoint()) * c64(0.5, 0.0);
    let norm = operator_norm_hermitian(&h);
    let m = rho.matrix() + h * c64(s / norm, 0.0);
    DensityMatrix::from_matrix_unchecked(crate::qcore::hermitize(&m))
}
