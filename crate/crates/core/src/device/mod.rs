//! Simulated interruptible device.
//!
//! The verifier only sees [`InterruptibleDevice`]: the qubit count, the depth,
//! the time per layer, the ledger, and the ability to run "prepare, apply an
//! inverse prefix, run hidden layers `1..=k`, measure in a Pauli basis".
//! The hidden circuit is a private field of [`DeviceProfile`] and has no
//! accessor.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{apply_layer, compose_unitary, CircuitError, LayeredCircuit};
use crate::qcore::rng::{self, Domain, StreamRng};
use crate::qcore::{
    c64, exact_pauli_distribution, sample_from_distribution, Axis, CMatrix, Outcome, PauliBasis, StateVec,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid noise configuration: {0}")]
    InvalidNoise(String),
    #[error("invalid device profile: {0}")]
    InvalidProfile(String),
    #[error("exact distributions are only available without depolarizing noise")]
    ExactUnavailable,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Classically controlled preparation on one qubit, applied to `|0⟩` in the
/// order X, H, S.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PrepGates {
    pub x: bool,
    pub h: bool,
    pub s: bool,
}

impl PrepGates {
    pub fn code(self) -> usize {
        usize::from(self.x) | usize::from(self.h) << 1 | usize::from(self.s) << 2
    }

    pub fn names(self) -> Vec<&'static str> {
        [(self.x, "X"), (self.h, "H"), (self.s, "S")].iter().filter(|(b, _)| *b).map(|(_, n)| *n).collect()
    }

    /// The single-qubit state produced from `|0⟩`.
    pub fn state(self) -> [crate::qcore::C64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = if self.x { [c64(0., 0.), c64(1., 0.)] } else { [c64(1., 0.), c64(0., 0.)] };
        if self.h {
            v = [(v[0] + v[1]) * h, (v[0] - v[1]) * h];
        }
        if self.s {
            v[1] *= c64(0., 1.);
        }
        v
    }
}

fn prep_product(prep: &[PrepGates]) -> StateVec {
    StateVec::product(&prep.iter().map(|p| p.state()).collect::<Vec<_>>())
}

/// One full query to the device.
#[derive(Debug, Clone)]
pub struct ShotRequest {
    pub prep: Vec<PrepGates>,
    pub inverse_prefix: LayeredCircuit,
    pub interrupt_at: usize,
    pub basis: PauliBasis,
}

/// A measurement record: principal data from the device and the classically
/// sampled ancilla data. `weight` is 1 for sampled shots; exact-distribution
/// enumeration uses it to carry probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot_id: u64,
    pub principal_basis: PauliBasis,
    pub principal_outcome: Outcome,
    pub ancilla_basis: PauliBasis,
    pub ancilla_outcome: Outcome,
    #[serde(default = "unit_weight", skip_serializing_if = "is_unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

fn is_unit_weight(w: &f64) -> bool {
    *w == 1.0
}

/// Executed layers, counted in units of the per-layer time `t`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TimeLedger {
    /// Total executed layers over all shots.
    pub units: u64,
    /// Number of shots by layers executed.
    pub per_shot_layers: BTreeMap<usize, u64>,
}

impl TimeLedger {
    pub fn charge(&mut self, layers: usize) {
        self.charge_many(layers, 1);
    }

    pub fn charge_many(&mut self, layers: usize, shots: u64) {
        self.units += layers as u64 * shots;
        *self.per_shot_layers.entry(layers).or_default() += shots;
    }

    pub fn merge(&mut self, other: &TimeLedger) {
        self.units += other.units;
        for (k, v) in &other.per_shot_layers {
            *self.per_shot_layers.entry(*k).or_default() += v;
        }
    }

    pub fn shots(&self) -> u64 {
        self.per_shot_layers.values().sum()
    }

    /// `self − earlier`, for a ledger that only grew since `earlier`.
    pub fn since(&self, earlier: &TimeLedger) -> TimeLedger {
        let mut per_shot_layers = BTreeMap::new();
        for (k, v) in &self.per_shot_layers {
            let d = v - earlier.per_shot_layers.get(k).copied().unwrap_or(0);
            if d > 0 {
                per_shot_layers.insert(*k, d);
            }
        }
        TimeLedger { units: self.units - earlier.units, per_shot_layers }
    }

    pub fn total_time(&self, t: f64) -> f64 {
        self.units as f64 * t
    }
}

/// A time expressed in units of `t`, printed symbolically as `"9t"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeUnits(pub u64);

impl fmt::Display for TimeUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}t", self.0)
    }
}

/// `N · Σ_{k=1}^{d} (2k − 1)` layer executions, which is `N · d²`.
pub fn device_time_for_learning(d: u64, n_shots: u64) -> TimeUnits {
    TimeUnits((1..=d).map(|k| 2 * k - 1).sum::<u64>() * n_shots)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    #[serde(default)]
    pub depolarizing_p: f64,
    /// Exponent of the perturbation applied to estimated window states,
    /// `5^γ · 10^-4`; `0` disables it.
    #[serde(default)]
    pub rdm_gamma: u8,
    /// Whether the verifier's inverse prefix suffers the same gate noise.
    #[serde(default)]
    pub noisy_prefix: bool,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig { depolarizing_p: 0.0, rdm_gamma: 0, noisy_prefix: false }
    }
}

impl NoiseConfig {
    pub fn depolarizing(p: f64) -> NoiseConfig {
        NoiseConfig { depolarizing_p: p, ..NoiseConfig::default() }
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        if !(0.0..1.0).contains(&self.depolarizing_p) {
            return Err(DeviceError::InvalidNoise(format!("depolarizing_p = {} not in [0, 1)", self.depolarizing_p)));
        }
        if self.rdm_gamma > 5 {
            return Err(DeviceError::InvalidNoise(format!("rdm_gamma = {} not in [0, 5]", self.rdm_gamma)));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.depolarizing_p == 0.0
    }
}

/// The device's hidden configuration.
#[derive(Clone)]
pub struct DeviceProfile {
    hidden: LayeredCircuit,
    t: f64,
}

impl fmt::Debug for DeviceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeviceProfile")
            .field("n", &self.hidden.n())
            .field("d", &self.hidden.depth())
            .field("t", &self.t)
            .finish_non_exhaustive()
    }
}

impl DeviceProfile {
    pub fn new(hidden: LayeredCircuit, t: f64) -> Result<DeviceProfile, DeviceError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(DeviceError::InvalidProfile(format!("time per layer {t} must be positive")));
        }
        Ok(DeviceProfile { hidden, t })
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn d(&self) -> usize {
        self.hidden.depth()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn check(&self, prefix: &LayeredCircuit, k: usize) -> Result<(), DeviceError> {
        if prefix.n() != self.n() {
            return Err(DeviceError::InvalidRequest(format!(
                "prefix on {} qubits, device has {}",
                prefix.n(),
                self.n()
            )));
        }
        if k > self.d() {
            return Err(DeviceError::InvalidRequest(format!("interrupt at {k} beyond depth {}", self.d())));
        }
        Ok(())
    }

    fn check_shot(&self, prep: &[PrepGates], basis: &PauliBasis) -> Result<(), DeviceError> {
        if prep.len() != self.n() || basis.len() != self.n() {
            return Err(DeviceError::InvalidRequest(format!(
                "prep covers {} and basis {} qubits, device has {}",
                prep.len(),
                basis.len(),
                self.n()
            )));
        }
        Ok(())
    }
}

fn random_pauli<R: Rng + ?Sized>(rng: &mut R) -> Axis {
    Axis::ALL[rng.random_range(0..3)]
}

/// Applies the layers gate by gate, inserting a uniformly random non-identity
/// Pauli on each touched qubit with probability `p` after every gate.
fn run_noisy<R: Rng + ?Sized>(state: &mut StateVec, circuit: &LayeredCircuit, layers: usize, p: f64, rng: &mut R) {
    for layer in &circuit.layers()[..layers] {
        for b in layer.blocks() {
            state.apply_unchecked(b.gate.matrix(), &b.qubits);
            if p > 0.0 {
                for &q in &b.qubits {
                    if rng.random::<f64>() < p {
                        state.apply_unchecked(&random_pauli(rng).matrix(), &[q]);
                    }
                }
            }
        }
    }
}

fn measure<R: Rng + ?Sized>(state: &StateVec, basis: &PauliBasis, rng: &mut R) -> Outcome {
    let dist = exact_pauli_distribution(state, basis).expect("basis length checked");
    dist.outcome(sample_from_distribution(&dist.probabilities, rng))
}

/// Simulates one shot: `|0…0⟩` → prep → inverse prefix → hidden layers
/// `1..=k` → Pauli measurement. Returns the outcome and the ledger delta of
/// `prefix depth + k` layers.
pub fn execute_shot(
    profile: &DeviceProfile,
    req: &ShotRequest,
    noise: &NoiseConfig,
    rng: &mut StreamRng,
) -> Result<(Outcome, TimeLedger), DeviceError> {
    noise.validate()?;
    profile.check(&req.inverse_prefix, req.interrupt_at)?;
    profile.check_shot(&req.prep, &req.basis)?;
    let mut state = prep_product(&req.prep);
    let prefix_p = if noise.noisy_prefix { noise.depolarizing_p } else { 0.0 };
    run_noisy(&mut state, &req.inverse_prefix, req.inverse_prefix.depth(), prefix_p, rng);
    run_noisy(&mut state, &profile.hidden, req.interrupt_at, noise.depolarizing_p, rng);
    let outcome = measure(&state, &req.basis, rng);
    let mut ledger = TimeLedger::default();
    ledger.charge(req.inverse_prefix.depth() + req.interrupt_at);
    Ok((outcome, ledger))
}

/// What the verifier may ask of a device.
pub trait InterruptibleDevice: Sync {
    fn n_qubits(&self) -> usize;
    fn depth(&self) -> usize;
    fn time_per_layer(&self) -> f64;
    /// Fixes the inverse prefix and interrupt layer for a batch of shots.
    fn program<'a>(&'a self, prefix: &LayeredCircuit, k: usize) -> Result<Box<dyn DeviceRun + 'a>, DeviceError>;
    fn ledger(&self) -> TimeLedger;
}

/// Shots against one programmed (prefix, k) pair.
pub trait DeviceRun {
    /// One sampled shot; `shot_id` selects the random stream.
    fn execute(&mut self, prep: &[PrepGates], basis: &PauliBasis, shot_id: u64) -> Result<Outcome, DeviceError>;
    /// Exact outcome probabilities indexed by outcome bits. Only available
    /// without gate noise; not charged to the ledger.
    fn exact_distribution(&mut self, prep: &[PrepGates], basis: &PauliBasis) -> Result<Vec<f64>, DeviceError>;
}

/// Statevector-backed [`InterruptibleDevice`].
pub struct SimulatedDevice {
    profile: DeviceProfile,
    noise: NoiseConfig,
    seed: u64,
    ledger: Mutex<TimeLedger>,
}

impl SimulatedDevice {
    pub fn new(profile: DeviceProfile, noise: NoiseConfig, seed: u64) -> Result<SimulatedDevice, DeviceError> {
        noise.validate()?;
        Ok(SimulatedDevice { profile, noise, seed, ledger: Mutex::new(TimeLedger::default()) })
    }

    pub fn noise(&self) -> &NoiseConfig {
        &self.noise
    }
}

impl InterruptibleDevice for SimulatedDevice {
    fn n_qubits(&self) -> usize {
        self.profile.n()
    }

    fn depth(&self) -> usize {
        self.profile.d()
    }

    fn time_per_layer(&self) -> f64 {
        self.profile.t()
    }

    fn program<'a>(&'a self, prefix: &LayeredCircuit, k: usize) -> Result<Box<dyn DeviceRun + 'a>, DeviceError> {
        self.profile.check(prefix, k)?;
        let unitary = if self.noise.is_noiseless() {
            let pre = compose_unitary(prefix, prefix.depth())?;
            Some(compose_unitary(&self.profile.hidden, k)? * pre)
        } else {
            None
        };
        Ok(Box::new(SimulatedRun {
            device: self,
            prefix: prefix.clone(),
            k,
            unitary,
            cache: HashMap::new(),
            scratch: Vec::new(),
            local: TimeLedger::default(),
        }))
    }

    fn ledger(&self) -> TimeLedger {
        self.ledger.lock().expect("ledger lock").clone()
    }
}

struct SimulatedRun<'a> {
    device: &'a SimulatedDevice,
    prefix: LayeredCircuit,
    k: usize,
    unitary: Option<CMatrix>,
    cache: HashMap<(usize, usize), Vec<f64>>,
    scratch: Vec<f64>,
    local: TimeLedger,
}

/// Largest register for which outcome distributions are memoized.
const CACHE_MAX_QUBITS: usize = 3;

impl SimulatedRun<'_> {
    fn key(prep: &[PrepGates], basis: &PauliBasis) -> (usize, usize) {
        (prep.iter().fold(0, |acc, p| acc * 8 + p.code()), basis.code())
    }

    fn compute_distribution(&self, prep: &[PrepGates], basis: &PauliBasis) -> Vec<f64> {
        let u = self.unitary.as_ref().expect("noiseless run has a composed unitary");
        let mut state = prep_product(prep);
        state.apply_full_unchecked(u);
        exact_pauli_distribution(&state, basis).expect("basis length checked").probabilities
    }

    /// Memoized for small registers.
    fn noiseless_distribution(&mut self, prep: &[PrepGates], basis: &PauliBasis) -> &[f64] {
        if prep.len() > CACHE_MAX_QUBITS {
            self.scratch = self.compute_distribution(prep, basis);
            return &self.scratch;
        }
        let key = Self::key(prep, basis);
        if !self.cache.contains_key(&key) {
            let d = self.compute_distribution(prep, basis);
            self.cache.insert(key, d);
        }
        &self.cache[&key]
    }
}

impl DeviceRun for SimulatedRun<'_> {
    fn execute(&mut self, prep: &[PrepGates], basis: &PauliBasis, shot_id: u64) -> Result<Outcome, DeviceError> {
        let profile = &self.device.profile;
        profile.check_shot(prep, basis)?;
        let mut rng = rng::stream(self.device.seed, Domain::Device, shot_id);
        let outcome = if self.unitary.is_some() {
            let n = prep.len();
            let bits = sample_from_distribution(self.noiseless_distribution(prep, basis), &mut rng);
            Outcome::from_bits(bits, n)
        } else {
            let noise = &self.device.noise;
            let mut state = prep_product(prep);
            let prefix_p = if noise.noisy_prefix { noise.depolarizing_p } else { 0.0 };
            run_noisy(&mut state, &self.prefix, self.prefix.depth(), prefix_p, &mut rng);
            run_noisy(&mut state, &profile.hidden, self.k, noise.depolarizing_p, &mut rng);
            measure(&state, basis, &mut rng)
        };
        self.local.charge(self.prefix.depth() + self.k);
        Ok(outcome)
    }

    fn exact_distribution(&mut self, prep: &[PrepGates], basis: &PauliBasis) -> Result<Vec<f64>, DeviceError> {
        self.device.profile.check_shot(prep, basis)?;
        if self.unitary.is_none() {
            return Err(DeviceError::ExactUnavailable);
        }
        Ok(self.noiseless_distribution(prep, basis).to_vec())
    }
}

impl Drop for SimulatedRun<'_> {
    fn drop(&mut self) {
        if let Ok(mut l) = self.device.ledger.lock() {
            l.merge(&self.local);
        }
    }
}

impl SimulatedDevice {
    /// Runs hidden layers `1..=k` after `prefix` on an arbitrary input state,
    /// without noise and without charging time. Test oracles use this to
    /// check the verifier's algebra; the verifier itself never calls it.
    #[doc(hidden)]
    pub fn oracle_apply(&self, state: &mut StateVec, prefix: &LayeredCircuit, k: usize) -> Result<(), DeviceError> {
        self.profile.check(prefix, k)?;
        for l in prefix.layers() {
            apply_layer(state, l);
        }
        for l in &self.profile.hidden.layers()[..k] {
            apply_layer(state, l);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Block, Gate, GateSet, Layer};

    fn g(name: &str) -> Gate {
        Gate::builtin(name).unwrap()
    }

    fn single_h() -> DeviceProfile {
        let l = Layer::new(1, vec![Block::single(0, g("H"))]).unwrap();
        DeviceProfile::new(LayeredCircuit::new(1, vec![l]).unwrap(), 1.0).unwrap()
    }

    fn z(n: usize) -> PauliBasis {
        PauliBasis(vec![Axis::Z; n])
    }

    #[test]
    fn prep_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let minus = PrepGates { x: true, h: true, s: false }.state();
        assert!((minus[0] - c64(h, 0.)).norm() < 1e-15 && (minus[1] - c64(-h, 0.)).norm() < 1e-15);
        let y = PrepGates { x: true, h: true, s: true }.state();
        assert!((y[1] - c64(0., -h)).norm() < 1e-15);
    }

    #[test]
    fn h_then_z_is_fair() {
        let p = single_h();
        let req = ShotRequest {
            prep: vec![PrepGates::default()],
            inverse_prefix: LayeredCircuit::empty(1),
            interrupt_at: 1,
            basis: z(1),
        };
        let n = 20_000;
        let ones = (0..n)
            .filter(|&i| {
                let mut r = rng::stream(3, Domain::Device, i);
                execute_shot(&p, &req, &NoiseConfig::default(), &mut r).unwrap().0 .0[0] == -1
            })
            .count();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn k_zero_runs_nothing() {
        let p = single_h();
        let req = ShotRequest {
            prep: vec![PrepGates::default()],
            inverse_prefix: LayeredCircuit::empty(1),
            interrupt_at: 0,
            basis: z(1),
        };
        for i in 0..100 {
            let (o, l) =
                execute_shot(&p, &req, &NoiseConfig::default(), &mut rng::stream(1, Domain::Device, i)).unwrap();
            assert_eq!(o.0, vec![1]);
            assert_eq!(l.units, 0);
        }
    }

    #[test]
    fn ledger_counts_prefix_and_hidden_layers() {
        let gs = GateSet::from_builtin_names(&["H"]).unwrap();
        let hidden = crate::circuit::random_circuit(1, 3, &gs, 0.0, &mut rng::seeded(0)).unwrap();
        let prefix = crate::circuit::random_circuit(1, 2, &gs, 0.0, &mut rng::seeded(1)).unwrap();
        let p = DeviceProfile::new(hidden, 1.0).unwrap();
        let req =
            ShotRequest { prep: vec![PrepGates::default()], inverse_prefix: prefix, interrupt_at: 3, basis: z(1) };
        let (_, l) = execute_shot(&p, &req, &NoiseConfig::default(), &mut rng::seeded(2)).unwrap();
        assert_eq!(l.units, 5);
        assert_eq!(TimeUnits(l.units).to_string(), "5t");
    }

    #[test]
    fn learning_time_closed_form() {
        assert_eq!(device_time_for_learning(1, 1), TimeUnits(1));
        assert_eq!(device_time_for_learning(3, 1).to_string(), "9t");
        assert_eq!(device_time_for_learning(5, 100), TimeUnits(2500));
    }

    #[test]
    fn invalid_requests() {
        let p = single_h();
        let bad_k = ShotRequest {
            prep: vec![PrepGates::default()],
            inverse_prefix: LayeredCircuit::empty(1),
            interrupt_at: 2,
            basis: z(1),
        };
        assert!(matches!(
            execute_shot(&p, &bad_k, &NoiseConfig::default(), &mut rng::seeded(0)),
            Err(DeviceError::InvalidRequest(_))
        ));
        let bad_basis = ShotRequest {
            prep: vec![PrepGates::default()],
            inverse_prefix: LayeredCircuit::empty(1),
            interrupt_at: 1,
            basis: z(2),
        };
        assert!(execute_shot(&p, &bad_basis, &NoiseConfig::default(), &mut rng::seeded(0)).is_err());
        assert!(NoiseConfig::depolarizing(1.0).validate().is_err());
        assert!(NoiseConfig { rdm_gamma: 6, ..NoiseConfig::default() }.validate().is_err());
    }

    #[test]
    fn simulated_device_matches_exact_and_charges_ledger() {
        let dev = SimulatedDevice::new(single_h(), NoiseConfig::default(), 9).unwrap();
        {
            let mut run = dev.program(&LayeredCircuit::empty(1), 1).unwrap();
            let d = run.exact_distribution(&[PrepGates::default()], &"X".parse().unwrap()).unwrap();
            assert!((d[0] - 1.0).abs() < 1e-12);
            for i in 0..10 {
                assert_eq!(run.execute(&[PrepGates::default()], &"X".parse().unwrap(), i).unwrap().0, vec![1]);
            }
        }
        assert_eq!(dev.ledger().units, 10);
        assert_eq!(dev.ledger().shots(), 10);
        let noisy = SimulatedDevice::new(single_h(), NoiseConfig::depolarizing(0.1), 9).unwrap();
        let mut run = noisy.program(&LayeredCircuit::empty(1), 1).unwrap();
        assert_eq!(run.exact_distribution(&[PrepGates::default()], &z(1)), Err(DeviceError::ExactUnavailable));
    }

    #[test]
    fn record_weight_is_optional_in_json() {
        let r = ShotRecord {
            shot_id: 4,
            principal_basis: "XZ".parse().unwrap(),
            principal_outcome: Outcome(vec![1, -1]),
            ancilla_basis: "YY".parse().unwrap(),
            ancilla_outcome: Outcome(vec![-1, -1]),
            weight: 1.0,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(!s.contains("weight"));
        assert_eq!(serde_json::from_str::<ShotRecord>(&s).unwrap(), r);
    }
}
