use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::{c64, CMatrix};
use super::state::validate_targets;
use super::{QcoreError, StateVec};

/// Single-qubit measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Index in the Pauli alphabet `I=0, X=1, Y=2, Z=3`.
    pub fn pauli_index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Axis> {
        match c {
            'X' | 'x' => Some(Axis::X),
            'Y' | 'y' => Some(Axis::Y),
            'Z' | 'z' => Some(Axis::Z),
            _ => None,
        }
    }

    /// Rotation that maps this axis' eigenbasis onto the computational basis:
    /// `H` for X, `H·S†` for Y, identity for Z.
    pub fn rotation(self) -> Option<CMatrix> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Axis::X => Some(CMatrix::from_row_slice(2, 2, &[c64(s, 0.), c64(s, 0.), c64(s, 0.), c64(-s, 0.)])),
            // H · diag(1, -i)
            Axis::Y => Some(CMatrix::from_row_slice(2, 2, &[c64(s, 0.), c64(0., -s), c64(s, 0.), c64(0., s)])),
            Axis::Z => None,
        }
    }

    /// The Pauli operator itself.
    pub fn matrix(self) -> CMatrix {
        match self {
            Axis::X => CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]),
            Axis::Y => CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)]),
            Axis::Z => CMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)]),
        }
    }
}

/// One axis per qubit, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliBasis(pub Vec<Axis>);

impl PauliBasis {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.0
    }

    /// All `3^n` bases in lexicographic order (X < Y < Z, qubit 0 slowest).
    pub fn all(n: usize) -> Vec<PauliBasis> {
        (0..3usize.pow(n as u32))
            .map(|mut code| {
                let mut axes = vec![Axis::X; n];
                for slot in axes.iter_mut().rev() {
                    *slot = Axis::ALL[code % 3];
                    code /= 3;
                }
                PauliBasis(axes)
            })
            .collect()
    }

    /// Draws each axis uniformly.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliBasis {
        PauliBasis((0..n).map(|_| Axis::ALL[rng.random_range(0..3)]).collect())
    }

    /// Base-3 code of the basis, qubit 0 most significant.
    pub fn code(&self) -> usize {
        self.0.iter().fold(0, |acc, a| acc * 3 + (a.pauli_index() - 1))
    }
}

impl fmt::Display for PauliBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|a| write!(f, "{}", a.as_char()))
    }
}

impl FromStr for PauliBasis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| Axis::from_char(c).ok_or_else(|| format!("invalid axis {c:?} in basis {s:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(PauliBasis)
    }
}

impl Serialize for PauliBasis {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliBasis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Eigenvalues `±1`, one per measured qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome(pub Vec<i8>);

impl Outcome {
    /// From a bit label where bit value 1 means eigenvalue −1; qubit 0 is the
    /// most significant of `len` bits.
    pub fn from_bits(bits: usize, len: usize) -> Outcome {
        Outcome((0..len).map(|q| if (bits >> (len - 1 - q)) & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn to_bits(&self) -> usize {
        self.0.iter().fold(0, |acc, &v| (acc << 1) | usize::from(v < 0))
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }
}

/// Outcome probabilities of one basis setting, indexed by [`Outcome::to_bits`].
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDistribution {
    pub n_qubits: usize,
    pub probabilities: Vec<f64>,
}

impl PauliDistribution {
    pub fn outcome(&self, bits: usize) -> Outcome {
        Outcome::from_bits(bits, self.n_qubits)
    }
}

/// Rotates `state` so that measuring all of `qubits` in the computational basis
/// realizes `basis`.
pub(crate) fn rotate_for_basis(state: &mut StateVec, basis: &PauliBasis, qubits: &[usize]) {
    for (a, &q) in basis.axes().iter().zip(qubits) {
        if let Some(r) = a.rotation() {
            state.apply_unchecked(&r, &[q]);
        }
    }
}

fn check_basis(state: &StateVec, basis: &PauliBasis) -> Result<(), QcoreError> {
    if basis.len() != state.n_qubits() {
        return Err(QcoreError::DimensionMismatch { expected: state.n_qubits(), actual: basis.len() });
    }
    validate_targets(state.n_qubits(), &(0..basis.len()).collect::<Vec<_>>())
}

/// Exact outcome distribution for measuring every qubit of `state` in `basis`.
pub fn exact_pauli_distribution(state: &StateVec, basis: &PauliBasis) -> Result<PauliDistribution, QcoreError> {
    check_basis(state, basis)?;
    let mut rotated = state.clone();
    let qubits: Vec<usize> = (0..state.n_qubits()).collect();
    rotate_for_basis(&mut rotated, basis, &qubits);
    Ok(PauliDistribution { n_qubits: state.n_qubits(), probabilities: rotated.probabilities() })
}

/// Draws an index from a discrete distribution by inversion.
pub fn sample_from_distribution<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let total: f64 = probabilities.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &p) in probabilities.iter().enumerate() {
        if u < p {
            return i;
        }
        u -= p;
    }
    // guard against rounding: fall back to the last index with positive mass
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// One projective measurement of every qubit in `basis`.
pub fn sample_pauli<R: Rng + ?Sized>(state: &StateVec, basis: &PauliBasis, rng: &mut R) -> Result<Outcome, QcoreError> {
    let dist = exact_pauli_distribution(state, basis)?;
    Ok(dist.outcome(sample_from_distribution(&dist.probabilities, rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_string_roundtrip() {
        let b: PauliBasis = "XZY".parse().unwrap();
        assert_eq!(b.to_string(), "XZY");
        assert!("XQ".parse::<PauliBasis>().is_err());
        assert_eq!(PauliBasis::all(2).len(), 9);
        assert_eq!(PauliBasis::all(2)[5].to_string(), "YZ");
        assert_eq!(PauliBasis::all(2)[5].code(), 5);
    }

    #[test]
    fn outcome_bits_roundtrip() {
        let o = Outcome(vec![1, -1, -1]);
        assert_eq!(o.to_bits(), 0b011);
        assert_eq!(Outcome::from_bits(0b011, 3), o);
    }

    #[test]
    fn eigenstates_give_deterministic_outcomes() {
        let s = FRAC_1_SQRT_2;
        let plus = StateVec::product(&[[c64(s, 0.), c64(s, 0.)]]);
        let minus_i = StateVec::product(&[[c64(s, 0.), c64(0., -s)]]);
        let one = StateVec::basis(1, 1).unwrap();
        let px = exact_pauli_distribution(&plus, &"X".parse().unwrap()).unwrap();
        assert!((px.probabilities[0] - 1.0).abs() < 1e-12);
        let py = exact_pauli_distribution(&minus_i, &"Y".parse().unwrap()).unwrap();
        assert!((py.probabilities[1] - 1.0).abs() < 1e-12);
        let pz = exact_pauli_distribution(&one, &"Z".parse().unwrap()).unwrap();
        assert!((pz.probabilities[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_diagonalizes_axis() {
        // R P R† = Z for each axis
        let z = Axis::Z.matrix();
        for a in [Axis::X, Axis::Y] {
            let r = a.rotation().unwrap();
            let d = &r * a.matrix() * r.adjoint();
            assert!(crate::qcore::max_abs_diff(&d, &z) < 1e-12, "{a:?}");
        }
    }

    #[test]
    fn sampled_frequencies_follow_born_rule() {
        let st = StateVec::product(&[[c64(0.6, 0.), c64(0.8, 0.)]]);
        let mut r = rng::seeded(11);
        let n = 20_000;
        let ones = (0..n).filter(|_| sample_pauli(&st, &"Z".parse().unwrap(), &mut r).unwrap().0[0] == -1).count();
        let f = ones as f64 / n as f64;
        assert!((f - 0.64).abs() < 0.02, "{f}");
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let st = StateVec::zero(2);
        assert!(exact_pauli_distribution(&st, &"X".parse().unwrap()).is_err());
    }
}
