//! Overlapping Pauli tomography of reduced Choi states.
//!
//! A record measures every one of the `2n` virtual wires (principal `0..n`,
//! ancilla `n..2n`) in some Pauli basis. The coefficient of a Pauli string
//! `Q` on a window is the mean, over the records whose bases agree with every
//! non-identity letter of `Q`, of the product of those wires' outcomes. Each
//! record therefore feeds `2^m` strings of every window at once.

mod bounds;
mod records;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::device::ShotRecord;
use crate::qcore::{c64, CMatrix, DensityMatrix, QcoreError};

pub use bounds::{binomial, required_samples, SampleBound, LOG_BASE};
pub use records::RecordSet;

/// Coefficient counts below this trigger a low-statistics warning.
pub const LOW_COUNT_WARNING: f64 = 30.0;

/// Largest supported window.
pub const MAX_WINDOW: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TomoError {
    #[error("window {subset:?} has size {actual}, expected {expected}")]
    WindowSizeMismatch { subset: Vec<usize>, expected: usize, actual: usize },
    #[error("invalid window {0:?}")]
    InvalidSubset(Vec<usize>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("record set is for {expected} qubits, record has {actual}")]
    QubitMismatch { expected: usize, actual: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// Pauli letters `I=0, X=1, Y=2, Z=3`, first letter on the first window wire.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(pub Vec<u8>);

impl PauliString {
    pub fn identity(m: usize) -> PauliString {
        PauliString(vec![0; m])
    }

    /// Base-4 index with the first letter most significant.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * 4 + l as usize)
    }

    pub fn from_index(mut index: usize, m: usize) -> PauliString {
        let mut letters = vec![0u8; m];
        for slot in letters.iter_mut().rev() {
            *slot = (index % 4) as u8;
            index /= 4;
        }
        PauliString(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `⊗_k σ_{Q_k}` in window order.
    pub fn matrix(&self) -> CMatrix {
        let m = self.len();
        let dim = 1usize << m;
        let mut out = CMatrix::zeros(dim, dim);
        let (xmask, _) = masks(&self.0);
        for r in 0..dim {
            out[(r, r ^ xmask)] = row_phase(&self.0, r);
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&l| write!(f, "{}", ['I', 'X', 'Y', 'Z'][l as usize]))
    }
}

impl FromStr for PauliString {
    type Err = TomoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(0),
                'X' => Ok(1),
                'Y' => Ok(2),
                'Z' => Ok(3),
                _ => Err(TomoError::InvalidParameter(format!("invalid Pauli letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PauliString)
    }
}

/// Bit masks (first letter = most significant bit) of the letters that flip
/// a basis state (X, Y) and of the non-identity letters.
fn masks(letters: &[u8]) -> (usize, usize) {
    let m = letters.len();
    let mut flip = 0;
    let mut support = 0;
    for (k, &l) in letters.iter().enumerate() {
        let bit = 1 << (m - 1 - k);
        if l == 1 || l == 2 {
            flip |= bit;
        }
        if l != 0 {
            support |= bit;
        }
    }
    (flip, support)
}

/// Entry of row `r` of `⊗σ` (the only nonzero one sits at column `r ^ flip`).
fn row_phase(letters: &[u8], r: usize) -> crate::qcore::C64 {
    let m = letters.len();
    let mut phase = c64(1., 0.);
    for (k, &l) in letters.iter().enumerate() {
        let b = (r >> (m - 1 - k)) & 1;
        match l {
            2 => phase *= if b == 0 { c64(0., -1.) } else { c64(0., 1.) },
            3 if b == 1 => phase = -phase,
            _ => {}
        }
    }
    phase
}

fn pauli_table(m: usize) -> &'static [CMatrix] {
    static TABLES: OnceLock<Vec<Vec<CMatrix>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        (0..=MAX_WINDOW)
            .map(|m| (0..1usize << (2 * m)).map(|i| PauliString::from_index(i, m).matrix()).collect())
            .collect()
    });
    &tables[m]
}

/// Raw linear-inversion estimate of one window.
#[derive(Debug, Clone)]
pub struct RdmEstimate {
    /// Virtual wires, e.g. `[i, j, i + n, j + n]`.
    pub subset: Vec<usize>,
    /// Hermitian, unit trace, possibly not positive semidefinite.
    pub matrix: DensityMatrix,
    /// Estimated coefficients indexed by [`PauliString::index`].
    pub coefficients: Vec<f64>,
    /// Total weight of compatible records per Pauli string.
    pub compat_counts: Vec<f64>,
}

impl RdmEstimate {
    pub fn m(&self) -> usize {
        self.subset.len()
    }

    /// Strings with no compatible record; their coefficient was set to 0.
    pub fn missing(&self) -> Vec<PauliString> {
        (0..self.compat_counts.len())
            .filter(|&i| self.compat_counts[i] <= 0.0)
            .map(|i| PauliString::from_index(i, self.m()))
            .collect()
    }

    pub fn min_count(&self) -> f64 {
        self.compat_counts.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Marginal on a sub-window given by positions into `subset`.
    pub fn marginal(&self, positions: &[usize]) -> Result<DensityMatrix, TomoError> {
        Ok(crate::qcore::partial_trace(&self.matrix, positions)?)
    }
}

/// Streaming estimator over a fixed list of windows. Each window keeps a
/// histogram over (local basis setting, local outcome), which is all the
/// conditional-mean estimator needs.
#[derive(Debug, Clone)]
pub struct TomoAccumulator {
    n: usize,
    subsets: Vec<Vec<usize>>,
    hist: Vec<Vec<f64>>,
    records: u64,
}

/// Per-wire `(axis code 0..3, outcome bit)` of a record on `2n` wires.
fn wire_data(rec: &ShotRecord, n: usize, wire: usize) -> (usize, usize) {
    let (basis, outcome) = if wire < n {
        (&rec.principal_basis, &rec.principal_outcome)
    } else {
        (&rec.ancilla_basis, &rec.ancilla_outcome)
    };
    let q = wire % n;
    (basis.axes()[q].pauli_index() - 1, usize::from(outcome.values()[q] < 0))
}

fn validate_subset(n: usize, subset: &[usize]) -> Result<(), TomoError> {
    let ok = !subset.is_empty()
        && subset.len() <= MAX_WINDOW
        && subset.iter().all(|&w| w < 2 * n)
        && subset.iter().enumerate().all(|(i, w)| !subset[..i].contains(w));
    if ok {
        Ok(())
    } else {
        Err(TomoError::InvalidSubset(subset.to_vec()))
    }
}

/// Pair windows `[i, j, i+n, j+n]` for `i < j`, or `[0, 1]` when `n = 1`.
pub fn default_subsets(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0, 1]];
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(vec![i, j, i + n, j + n]);
        }
    }
    out
}

/// Single-qubit Choi windows `[i, i+n]`.
pub fn qubit_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| vec![i, i + n]).collect()
}

impl TomoAccumulator {
    pub fn new(n: usize, subsets: Vec<Vec<usize>>) -> Result<TomoAccumulator, TomoError> {
        for s in &subsets {
            validate_subset(n, s)?;
        }
        let hist = subsets.iter().map(|s| vec![0.0; 3usize.pow(s.len() as u32) << s.len()]).collect();
        Ok(TomoAccumulator { n, subsets, hist, records: 0 })
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn records(&self) -> u64 {
        self.records
    }

    pub fn add(&mut self, rec: &ShotRecord) -> Result<(), TomoError> {
        if rec.principal_basis.len() != self.n
            || rec.principal_outcome.values().len() != self.n
            || rec.ancilla_basis.len() != self.n
            || rec.ancilla_outcome.values().len() != self.n
        {
            return Err(TomoError::QubitMismatch { expected: self.n, actual: rec.principal_basis.len() });
        }
        for (s, h) in self.subsets.iter().zip(self.hist.iter_mut()) {
            let mut setting = 0;
            let mut bits = 0;
            for &w in s {
                let (a, b) = wire_data(rec, self.n, w);
                setting = setting * 3 + a;
                bits = (bits << 1) | b;
            }
            h[(setting << s.len()) | bits] += rec.weight;
        }
        self.records += 1;
        Ok(())
    }

    /// Adds the per-window histograms of `other`, which must use the same
    /// windows.
    pub fn merge(&mut self, other: &TomoAccumulator) {
        assert_eq!(self.subsets, other.subsets, "merging accumulators over different windows");
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self.records += other.records;
    }

    pub fn estimates(&self) -> Vec<RdmEstimate> {
        self.subsets.iter().zip(&self.hist).map(|(s, h)| estimate_from_histogram(s, h)).collect()
    }
}

fn estimate_from_histogram(subset: &[usize], hist: &[f64]) -> RdmEstimate {
    let m = subset.len();
    let n_strings = 1usize << (2 * m);
    let mut sums = vec![0.0; n_strings];
    let mut counts = vec![0.0; n_strings];
    let settings = 3usize.pow(m as u32);
    for setting in 0..settings {
        let mut axes = vec![0usize; m];
        let mut c = setting;
        for slot in axes.iter_mut().rev() {
            *slot = c % 3 + 1;
            c /= 3;
        }
        for bits in 0..(1usize << m) {
            let w = hist[(setting << m) | bits];
            if w == 0.0 {
                continue;
            }
            // every string that keeps a subset of this setting's letters
            for keep in 0..(1usize << m) {
                let mut idx = 0;
                for (k, &a) in axes.iter().enumerate() {
                    let on = (keep >> (m - 1 - k)) & 1 == 1;
                    idx = idx * 4 + if on { a } else { 0 };
                }
                let parity = (bits & keep).count_ones() & 1;
                sums[idx] += if parity == 1 { -w } else { w };
                counts[idx] += w;
            }
        }
    }
    let coefficients: Vec<f64> = (0..n_strings)
        .map(|i| {
            if i == 0 {
                1.0
            } else if counts[i] > 0.0 {
                sums[i] / counts[i]
            } else {
                0.0
            }
        })
        .collect();
    RdmEstimate {
        subset: subset.to_vec(),
        matrix: DensityMatrix::from_pauli_coefficients(m, &coefficients),
        coefficients,
        compat_counts: counts,
    }
}

impl DensityMatrix {
    /// `2^{-m} Σ_Q c_Q ⊗σ_Q` with coefficients indexed by [`PauliString::index`].
    pub fn from_pauli_coefficients(m: usize, coefficients: &[f64]) -> DensityMatrix {
        let dim = 1usize << m;
        let mut out = CMatrix::zeros(dim, dim);
        for (i, p) in pauli_table(m).iter().enumerate() {
            let c = coefficients[i];
            if c != 0.0 {
                out += p.map(|z| z * c);
            }
        }
        let scale = 1.0 / dim as f64;
        DensityMatrix::new(out.map(|z| z * scale)).expect("Pauli expansion with real coefficients is Hermitian")
    }

    /// `tr(ρ σ_Q)`.
    pub fn pauli_expectation(&self, q: &PauliString) -> f64 {
        crate::qcore::hs_inner(self.matrix(), &q.matrix()).re
    }
}

/// Coefficient of one Pauli string on one window, by a direct pass over the
/// records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliCoefficient {
    pub value: f64,
    pub n_compatible: f64,
    /// No compatible record existed; `value` is 0.
    pub no_compatible_shots: bool,
}

pub fn estimate_pauli_coefficient(
    rs: &RecordSet,
    subset: &[usize],
    pauli: &PauliString,
) -> Result<PauliCoefficient, TomoError> {
    validate_subset(rs.n(), subset)?;
    if pauli.len() != subset.len() {
        return Err(TomoError::WindowSizeMismatch {
            subset: subset.to_vec(),
            expected: subset.len(),
            actual: pauli.len(),
        });
    }
    let mut sum = 0.0;
    let mut count = 0.0;
    'records: for rec in rs.records() {
        let mut sign = 1.0;
        for (&w, &l) in subset.iter().zip(&pauli.0) {
            if l == 0 {
                continue;
            }
            let (axis, bit) = wire_data(rec, rs.n(), w);
            if axis + 1 != l as usize {
                continue 'records;
            }
            if bit == 1 {
                sign = -sign;
            }
        }
        sum += sign * rec.weight;
        count += rec.weight;
    }
    if pauli.0.iter().all(|&l| l == 0) {
        return Ok(PauliCoefficient { value: 1.0, n_compatible: count, no_compatible_shots: count == 0.0 });
    }
    if count == 0.0 {
        return Ok(PauliCoefficient { value: 0.0, n_compatible: 0.0, no_compatible_shots: true });
    }
    Ok(PauliCoefficient { value: sum / count, n_compatible: count, no_compatible_shots: false })
}

/// Estimates every window of size `m` from one shared record set. With
/// `subsets = None`, the pair windows of [`default_subsets`] are used.
pub fn pauli_tomo(m: usize, rs: &RecordSet, subsets: Option<&[Vec<usize>]>) -> Result<Vec<RdmEstimate>, TomoError> {
    let subsets: Vec<Vec<usize>> = match subsets {
        Some(s) => s.to_vec(),
        None => default_subsets(rs.n()),
    };
    for s in &subsets {
        if s.len() != m {
            return Err(TomoError::WindowSizeMismatch { subset: s.clone(), expected: m, actual: s.len() });
        }
    }
    let mut acc = TomoAccumulator::new(rs.n(), subsets)?;
    for rec in rs.records() {
        acc.add(rec)?;
    }
    Ok(acc.estimates())
}

/// Clips negative eigenvalues and renormalizes.
pub fn project_to_physical(est: &RdmEstimate) -> DensityMatrix {
    est.matrix.clip_to_physical()
}
