use crate::circuit::{
    choi_density, enumerate_config_classes, gate_set_resolution, ConfigElement, DirectedGate, Gate, GateSet, Resolution,
};
use crate::qcore::{hs_inner, purity, trace_distance, DensityMatrix};

use super::ReconstructError;

/// Residuals closer than this to the minimum count as a tie.
pub const TIE_TOL: f64 = 1e-12;

/// Choi states of every gate of a set, computed once per reconstruction.
#[derive(Debug, Clone)]
pub struct References {
    pub singles: Vec<DensityMatrix>,
    pub directed: Vec<(DirectedGate, DensityMatrix)>,
    pub elements: Vec<ConfigElement>,
    pub resolution: Resolution,
}

impl References {
    pub fn new(gs: &GateSet) -> Result<References, ReconstructError> {
        let singles = gs.singles().iter().map(|g| choi_density(g.matrix(), 1)).collect();
        let directed =
            gs.directed_doubles().into_iter().map(|d| (d, choi_density(&gs.directed_matrix(d), 2))).collect();
        let elements = enumerate_config_classes(gs)?;
        let resolution = gate_set_resolution(gs)?;
        Ok(References { singles, directed, elements, resolution })
    }
}

fn unique_within<T: Clone>(
    cands: Vec<(T, f64)>,
    eps: f64,
    labels: impl Fn(&T) -> String,
) -> Result<Option<(T, f64)>, ReconstructError> {
    let hits: Vec<(T, f64)> = cands.into_iter().filter(|(_, d)| *d < eps).collect();
    match hits.len() {
        0 => Ok(None),
        1 => Ok(hits.into_iter().next()),
        _ => Err(ReconstructError::AmbiguousMatch {
            layer: None,
            candidates: hits.iter().map(|(t, d)| (labels(t), *d)).collect(),
        }),
    }
}

pub(crate) fn two_qubit_distances(
    est: &DensityMatrix,
    refs: &References,
) -> Result<Vec<(DirectedGate, f64)>, ReconstructError> {
    refs.directed.iter().map(|(d, r)| Ok((*d, trace_distance(est, r)?))).collect()
}

pub(crate) fn single_distances(est2: &DensityMatrix, refs: &References) -> Result<Vec<(usize, f64)>, ReconstructError> {
    refs.singles.iter().enumerate().map(|(i, r)| Ok((i, trace_distance(est2, r)?))).collect()
}

/// The unique directed two-qubit gate whose Choi state is within `eps` of
/// the pair-window estimate `est` (wires `i, j, i', j'`).
pub fn match_two_qubit(
    est: &DensityMatrix,
    gs: &GateSet,
    eps: f64,
) -> Result<Option<(DirectedGate, f64)>, ReconstructError> {
    let refs: Vec<(DirectedGate, DensityMatrix)> =
        gs.directed_doubles().into_iter().map(|d| (d, choi_density(&gs.directed_matrix(d), 2))).collect();
    let cands =
        refs.iter().map(|(d, r)| Ok((*d, trace_distance(est, r)?))).collect::<Result<Vec<_>, ReconstructError>>()?;
    unique_within(cands, eps, |d| gs.directed_label(*d))
}

pub(crate) fn match_two_qubit_refs(
    est: &DensityMatrix,
    gs: &GateSet,
    refs: &References,
    eps: f64,
) -> Result<Option<(DirectedGate, f64)>, ReconstructError> {
    unique_within(two_qubit_distances(est, refs)?, eps, |d| gs.directed_label(*d))
}

/// The unique single-qubit gate (index into `g1`) within `eps` of the
/// two-wire estimate `est2` (wires `j, j'`).
pub fn match_single_qubit(
    est2: &DensityMatrix,
    g1: &[Gate],
    eps: f64,
) -> Result<Option<(usize, f64)>, ReconstructError> {
    let cands = g1
        .iter()
        .enumerate()
        .map(|(i, g)| Ok((i, trace_distance(est2, &choi_density(g.matrix(), 1))?)))
        .collect::<Result<Vec<_>, ReconstructError>>()?;
    unique_within(cands, eps, |i| g1[*i].name().to_string())
}

pub(crate) fn match_single_refs(
    est2: &DensityMatrix,
    gs: &GateSet,
    refs: &References,
    eps: f64,
) -> Result<Option<(usize, f64)>, ReconstructError> {
    unique_within(single_distances(est2, refs)?, eps, |i| gs.singles()[*i].name().to_string())
}

/// A layer contains an entangling gate on the pair iff the smaller
/// single-qubit Choi marginal purity is below `threshold`.
pub fn detect_cnot_by_purity(a: &DensityMatrix, b: &DensityMatrix, threshold: f64) -> Result<bool, ReconstructError> {
    Ok(purity(a)?.min(purity(b)?) < threshold)
}

/// Best single-qubit gate by `R(g) = 1 − ⟨Φ|(g†⊗I) ρ (g⊗I)|Φ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualMatch {
    pub gate: usize,
    pub residual: f64,
    /// Another gate reached the same residual; the earlier one in the set won.
    pub tie: bool,
}

pub fn minimize_residual(rho: &DensityMatrix, g1: &[Gate]) -> Result<ResidualMatch, ReconstructError> {
    if g1.is_empty() {
        return Err(ReconstructError::Circuit(crate::circuit::CircuitError::EmptyGateSet));
    }
    let residuals: Vec<f64> =
        g1.iter().map(|g| 1.0 - hs_inner(rho.matrix(), choi_density(g.matrix(), 1).matrix()).re).collect();
    let (gate, residual) = residuals.iter().copied().enumerate().fold((0, f64::INFINITY), |best, (i, r)| {
        if r < best.1 - TIE_TOL {
            (i, r)
        } else {
            best
        }
    });
    let tie = residuals.iter().enumerate().any(|(i, &r)| i != gate && (r - residual).abs() <= TIE_TOL);
    Ok(ResidualMatch { gate, residual, tie })
}
