use std::fmt;

use serde::Serialize;

use crate::qcore::{is_unitary, kron, trace_distance, CMatrix, DensityMatrix, StateVec, C64, MATRIX_TOL};

use super::{CircuitError, DirectedGate, GateSet};

/// Distance below which two configuration states count as the same.
pub const DUPLICATE_TOL: f64 = 1e-9;

/// `(U ⊗ I)|Ψ⟩` on `2n` wires: principal qubits `0..n`, ancilla `i + n`
/// paired with principal `i`.
pub fn choi_state(u: &CMatrix, n: usize) -> Result<StateVec, CircuitError> {
    if u.nrows() != 1 << n || !is_unitary(u, MATRIX_TOL) {
        return Err(CircuitError::NonUnitary(format!("{}×{} matrix for n = {n}", u.nrows(), u.ncols())));
    }
    Ok(choi_state_unchecked(u, n))
}

pub(crate) fn choi_state_unchecked(u: &CMatrix, n: usize) -> StateVec {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); dim * dim];
    for p in 0..dim {
        for a in 0..dim {
            amps[(p << n) | a] = u[(p, a)] * scale;
        }
    }
    StateVec::from_amplitudes(amps).expect("unitary columns give a normalized Choi state")
}

/// Choi density matrix of a trusted unitary.
pub fn choi_density(u: &CMatrix, n: usize) -> DensityMatrix {
    choi_state_unchecked(u, n).density()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConfigClass {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl ConfigClass {
    pub const ALL: [ConfigClass; 5] =
        [ConfigClass::C1, ConfigClass::C2, ConfigClass::C3, ConfigClass::C4, ConfigClass::C5];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The gates behind one configuration of a window `(w1, w2)`.
///
/// * `C1(a, b)`: singles `a` on `w1` and `b` on `w2`.
/// * `C2(g)`: directed double `g` on `(w1, w2)`.
/// * `C3(a, g)`: single `a` on `w1`; `g` on `(w2, outside)`.
/// * `C4(g, b)`: `g` on `(outside, w1)`; single `b` on `w2`.
/// * `C5(g, h)`: `g` on `(outside, w1)` and `h` on `(w2, outside)`.
///
/// Both orientations of every asymmetric double are enumerated, so these
/// placements cover every way a window wire can be entangled with a qubit
/// outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigSource {
    C1(usize, usize),
    C2(DirectedGate),
    C3(usize, DirectedGate),
    C4(DirectedGate, usize),
    C5(DirectedGate, DirectedGate),
}

impl ConfigSource {
    pub fn class(&self) -> ConfigClass {
        match self {
            ConfigSource::C1(..) => ConfigClass::C1,
            ConfigSource::C2(..) => ConfigClass::C2,
            ConfigSource::C3(..) => ConfigClass::C3,
            ConfigSource::C4(..) => ConfigClass::C4,
            ConfigSource::C5(..) => ConfigClass::C5,
        }
    }

    pub fn label(&self, gs: &GateSet) -> String {
        let s = |i: usize| gs.singles()[i].name().to_string();
        let d = |g: DirectedGate| gs.directed_label(g);
        match *self {
            ConfigSource::C1(a, b) => format!("C1[{} ⊗ {}]", s(a), s(b)),
            ConfigSource::C2(g) => format!("C2[{}]", d(g)),
            ConfigSource::C3(a, g) => format!("C3[{} ⊗ {}·out]", s(a), d(g)),
            ConfigSource::C4(g, b) => format!("C4[out·{} ⊗ {}]", d(g), s(b)),
            ConfigSource::C5(g, h) => format!("C5[out·{} ⊗ {}·out]", d(g), d(h)),
        }
    }

    /// Window state on wires `(w1, w2, w1', w2')`, built from the full Choi
    /// state of the gates involved and traced down to the window.
    pub fn state(&self, gs: &GateSet) -> DensityMatrix {
        let single = |i: usize| gs.singles()[i].matrix().clone();
        let double = |g: DirectedGate| gs.directed_matrix(g);
        let (u, n, keep): (CMatrix, usize, Vec<usize>) = match *self {
            ConfigSource::C1(a, b) => (kron(&single(a), &single(b)), 2, vec![0, 1, 2, 3]),
            ConfigSource::C2(g) => (double(g), 2, vec![0, 1, 2, 3]),
            // qubits (w1, w2, out)
            ConfigSource::C3(a, g) => (kron(&single(a), &double(g)), 3, vec![0, 1, 3, 4]),
            // qubits (out, w1, w2)
            ConfigSource::C4(g, b) => (kron(&double(g), &single(b)), 3, vec![1, 2, 4, 5]),
            // qubits (out, w1, w2, out)
            ConfigSource::C5(g, h) => (kron(&double(g), &double(h)), 4, vec![1, 2, 5, 6]),
        };
        choi_state_unchecked(&u, n).reduced_density(&keep).expect("window wires are valid")
    }
}

/// One distinct configuration state, with every gate combination producing it.
#[derive(Debug, Clone)]
pub struct ConfigElement {
    pub class: ConfigClass,
    pub sources: Vec<ConfigSource>,
    pub state: DensityMatrix,
}

/// Every configuration before duplicates are merged, in class order.
pub fn raw_config_elements(gs: &GateSet) -> Vec<(ConfigSource, DensityMatrix)> {
    let singles = 0..gs.singles().len();
    let dd = gs.directed_doubles();
    let mut sources = Vec::new();
    for a in singles.clone() {
        for b in singles.clone() {
            sources.push(ConfigSource::C1(a, b));
        }
    }
    sources.extend(dd.iter().map(|&g| ConfigSource::C2(g)));
    for a in singles.clone() {
        for &g in &dd {
            sources.push(ConfigSource::C3(a, g));
        }
    }
    for &g in &dd {
        for b in singles.clone() {
            sources.push(ConfigSource::C4(g, b));
        }
    }
    for &g in &dd {
        for &h in &dd {
            sources.push(ConfigSource::C5(g, h));
        }
    }
    sources.into_iter().map(|s| (s, s.state(gs))).collect()
}

fn merge(gs: &GateSet) -> Result<Vec<ConfigElement>, CircuitError> {
    let mut out: Vec<ConfigElement> = Vec::new();
    for (src, state) in raw_config_elements(gs) {
        let mut merged = false;
        for el in out.iter_mut() {
            if trace_distance(&el.state, &state)? < DUPLICATE_TOL {
                let strict = |c: ConfigClass| matches!(c, ConfigClass::C1 | ConfigClass::C2);
                if strict(el.class) || strict(src.class()) {
                    return Err(CircuitError::DegenerateGateSet {
                        first: el.sources[0].label(gs),
                        second: src.label(gs),
                    });
                }
                el.sources.push(src);
                merged = true;
                break;
            }
        }
        if !merged {
            out.push(ConfigElement { class: src.class(), sources: vec![src], state });
        }
    }
    Ok(out)
}

/// All distinct configuration states `C1 ∪ … ∪ C5` of the gate set.
///
/// Two configurations that produce the same window state are merged when
/// both involve a gate reaching outside the window; a coincidence involving
/// a `C1` or `C2` configuration means the gate set cannot tell two layers
/// apart and is reported as [`CircuitError::DegenerateGateSet`].
pub fn enumerate_config_classes(gs: &GateSet) -> Result<Vec<ConfigElement>, CircuitError> {
    merge(gs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    Finite(f64),
    /// Only one configuration exists, so any tolerance is safe.
    Infinite,
}

impl Resolution {
    pub fn value(self) -> f64 {
        match self {
            Resolution::Finite(v) => v,
            Resolution::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Finite(v) => write!(f, "{v}"),
            Resolution::Infinite => write!(f, "Infinite"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResolutionReport {
    /// Configuration counts per class before merging duplicates.
    pub raw_counts: [usize; 5],
    /// Distinct states per class after merging.
    pub distinct_counts: [usize; 5],
    pub resolution: Resolution,
    /// Labels of the closest pair and their trace distance.
    pub closest: Option<(String, String, f64)>,
}

/// Class inventory, `d_C` and the pair attaining it.
pub fn resolution_report(gs: &GateSet) -> Result<ResolutionReport, CircuitError> {
    let mut raw_counts = [0usize; 5];
    let dd = gs.directed_doubles().len();
    let s = gs.singles().len();
    raw_counts[0] = s * s;
    raw_counts[1] = dd;
    raw_counts[2] = s * dd;
    raw_counts[3] = s * dd;
    raw_counts[4] = dd * dd;
    let elements = merge(gs)?;
    let mut distinct_counts = [0usize; 5];
    for el in &elements {
        distinct_counts[el.class.index()] += 1;
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            let dist = trace_distance(&elements[i].state, &elements[j].state)?;
            if best.is_none_or(|(_, _, b)| dist < b) {
                best = Some((i, j, dist));
            }
        }
    }
    let (resolution, closest) = match best {
        None => (Resolution::Infinite, None),
        Some((i, j, dist)) => (
            Resolution::Finite(dist / 2.0),
            Some((elements[i].sources[0].label(gs), elements[j].sources[0].label(gs), dist)),
        ),
    };
    Ok(ResolutionReport { raw_counts, distinct_counts, resolution, closest })
}

/// `d_C`: half the smallest trace distance between distinct configurations.
pub fn gate_set_resolution(gs: &GateSet) -> Result<Resolution, CircuitError> {
    resolution_report(gs).map(|r| r.resolution)
}
