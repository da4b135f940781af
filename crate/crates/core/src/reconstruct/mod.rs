//! Layer-by-layer reconstruction of a hidden circuit from Choi-state
//! tomography on an interruptible device.

mod learn;
mod matching;
mod noise;
mod prep;

pub use learn::{
    collect as collect_records, learn_multi, learn_single, LayerOutcome, LayerReport, LedgerSummary,
    ReconstructionReport,
};
pub use matching::{
    detect_cnot_by_purity, match_single_qubit, match_two_qubit, minimize_residual, References, ResidualMatch, TIE_TOL,
};
pub use noise::{perturb_rdm, rdm_noise_scale};
pub use prep::{all_preps, prep_gates_for, prep_init, PrepResult};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::CircuitError;
use crate::device::DeviceError;
use crate::qcore::QcoreError;
use crate::tomo::TomoError;

/// Single-qubit Choi marginals with purity below this indicate an entangling
/// gate in hardware mode.
pub const PURITY_THRESHOLD: f64 = 0.75;

fn at(layer: &Option<usize>) -> String {
    layer.map(|k| format!(" in layer {k}")).unwrap_or_default()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error("ambiguous match{}: {candidates:?}", at(layer))]
    AmbiguousMatch { layer: Option<usize>, candidates: Vec<(String, f64)> },
    #[error("qubit {qubit} assigned to two gates{}", at(layer))]
    OverlappingAssignment { layer: Option<usize>, qubit: usize },
    #[error("no gate within eps for qubit {qubit}{}; nearest: {nearest:?}", at(layer))]
    NoMatch { layer: Option<usize>, qubit: usize, nearest: Vec<(String, f64)> },
    #[error("hardware mode supports 0 or 2 low-purity qubits, found {flagged:?}{}", at(layer))]
    UnsupportedFlagCount { layer: Option<usize>, flagged: Vec<usize> },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Tomo(#[from] TomoError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

impl ReconstructError {
    pub(crate) fn at_layer(mut self, k: usize) -> ReconstructError {
        match &mut self {
            ReconstructError::AmbiguousMatch { layer, .. }
            | ReconstructError::OverlappingAssignment { layer, .. }
            | ReconstructError::NoMatch { layer, .. }
            | ReconstructError::UnsupportedFlagCount { layer, .. } => *layer = Some(k),
            _ => {}
        }
        self
    }

    /// Matching failures, as opposed to configuration or internal errors.
    pub fn is_match_failure(&self) -> bool {
        matches!(
            self,
            ReconstructError::AmbiguousMatch { .. }
                | ReconstructError::OverlappingAssignment { .. }
                | ReconstructError::NoMatch { .. }
                | ReconstructError::UnsupportedFlagCount { .. }
        )
    }
}

/// Which gate identification procedure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Trace-distance matching of pair-window estimates.
    #[default]
    Strict,
    /// Purity-based entangler detection and residual minimization on
    /// single-qubit windows.
    Hardware,
}

/// How estimates are compared with candidate Choi states in strict mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Matching {
    /// Unique candidate within `eps`, otherwise an error.
    #[default]
    Threshold,
    /// Closest candidate regardless of distance.
    Nearest,
}

/// Sampled shots, or the exact outcome distribution enumerated as weighted
/// records (noiseless devices only; charges no device time).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    #[default]
    Shots,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnOptions {
    /// Shots per layer.
    pub shots: u64,
    pub eps: f64,
    pub mode: Mode,
    pub matching: Matching,
    pub sampling: Sampling,
    pub seed: u64,
    /// Strength of the synthetic estimate perturbation; 0 disables it.
    pub rdm_gamma: u8,
    pub purity_threshold: f64,
    /// Group labels for the learned layers; one group per layer when absent.
    pub groups: Option<Vec<usize>>,
    pub keep_records: bool,
}

impl Default for LearnOptions {
    fn default() -> Self {
        LearnOptions {
            shots: 8192 * 81,
            eps: 0.2,
            mode: Mode::Strict,
            matching: Matching::Threshold,
            sampling: Sampling::Shots,
            seed: 0,
            rdm_gamma: 0,
            purity_threshold: PURITY_THRESHOLD,
            groups: None,
            keep_records: false,
        }
    }
}

impl LearnOptions {
    pub fn validate(&self) -> Result<(), ReconstructError> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(ReconstructError::InvalidParameter(format!("eps = {} must be positive", self.eps)));
        }
        if self.sampling == Sampling::Shots && self.shots == 0 {
            return Err(ReconstructError::InvalidParameter("shots must be positive".into()));
        }
        if !(self.purity_threshold > 0.0 && self.purity_threshold <= 1.0) {
            return Err(ReconstructError::InvalidParameter(format!(
                "purity threshold {} must be in (0, 1]",
                self.purity_threshold
            )));
        }
        Ok(())
    }
}
