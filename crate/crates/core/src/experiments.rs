//! Classical simulation sweeps: tomography accuracy against the shot count,
//! and reconstruction accuracy against estimate noise and depth.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::circuit::{choi_density, compose_unitary, random_circuit, Block, Gate, GateSet, Layer, LayeredCircuit};
use crate::device::{DeviceProfile, InterruptibleDevice, NoiseConfig, ShotRecord, SimulatedDevice};
use crate::qcore::rng::{derive_seed, stream, Domain};
use crate::qcore::{
    c64, exact_pauli_distribution, hermitian_eigen, relative_fidelity, sample_from_distribution, trace_distance,
    CMatrix, DensityMatrix, Outcome, PauliBasis, StateVec,
};
use crate::reconstruct::{perturb_rdm, LearnOptions, ReconstructError, Sampling};
use crate::tomo::{binomial, project_to_physical, RdmEstimate, TomoAccumulator, MAX_WINDOW};

/// Haar-random unitary via QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal divided out.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(dim, dim, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state on `n` qubits.
pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVec {
    let amps = (0..1usize << n).map(|_| c64(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    StateVec::normalized(amps).expect("a Gaussian vector is nonzero")
}

/// Unitary closest (in Frobenius norm) to the matrix reshaped from the
/// leading eigenvector of an estimated `n`-qubit Choi state.
pub fn nearest_unitary_from_choi(rho: &DensityMatrix, n: usize) -> CMatrix {
    let d = 1usize << n;
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let top = (0..vals.len()).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).expect("nonempty");
    let m = CMatrix::from_fn(d, d, |p, a| vecs[((p << n) | a, top)]);
    let svd = m.svd(true, true);
    svd.u.expect("requested") * svd.v_t.expect("requested")
}

/// Random-Pauli state tomography of `state` on the given windows from
/// `shots` shots. Shots are aggregated into weighted records before
/// estimation; every shot still serves every window.
pub fn state_tomography<R: Rng + ?Sized>(
    state: &StateVec,
    subsets: &[Vec<usize>],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<RdmEstimate>, ReconstructError> {
    let n = state.n_qubits();
    let bases = PauliBasis::all(n);
    let dists = bases
        .iter()
        .map(|b| Ok(exact_pauli_distribution(state, b)?.probabilities))
        .collect::<Result<Vec<_>, ReconstructError>>()?;
    let outcomes = 1usize << n;
    let mut counts = vec![0u64; bases.len() * outcomes];
    for _ in 0..shots {
        let b = rng.random_range(0..bases.len());
        counts[b * outcomes + sample_from_distribution(&dists[b], rng)] += 1;
    }
    // ancilla slots are unused by principal-only windows
    let dummy_basis: PauliBasis = "Z".repeat(n).parse().expect("valid basis");
    let dummy_outcome = Outcome(vec![1; n]);
    let mut acc = TomoAccumulator::new(n, subsets.to_vec())?;
    for (cell, &c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        acc.add(&ShotRecord {
            shot_id: cell as u64,
            principal_basis: bases[cell / outcomes].clone(),
            principal_outcome: Outcome::from_bits(cell % outcomes, n),
            ancilla_basis: dummy_basis.clone(),
            ancilla_outcome: dummy_outcome.clone(),
            weight: c as f64,
        })?;
    }
    Ok(acc.estimates())
}

/// All size-`m` subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n as u64, m as u64) as usize);
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSweepConfig {
    pub n: usize,
    pub window_sizes: Vec<usize>,
    pub shots: Vec<u64>,
    pub seeds: usize,
    pub seed: u64,
    /// Also estimate the whole `n`-qubit state.
    pub full_state: bool,
}

impl Default for SampleSweepConfig {
    fn default() -> Self {
        SampleSweepConfig {
            n: 5,
            window_sizes: vec![1, 2, 3],
            shots: (1..=6).map(|k| 10 * 10u64.pow(k)).collect(),
            seeds: 5,
            seed: 0,
            full_state: true,
        }
    }
}

/// One `(m, N)` cell: fidelities of projected estimates, trace distances of
/// raw estimates. Per-seed values are averaged over the windows first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSweepRow {
    pub m: usize,
    pub n_shots: u64,
    pub mean_fidelity: f64,
    pub std: f64,
    pub median_trace_distance: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = if values.len() > 1 { values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

pub fn sweep_samples(cfg: &SampleSweepConfig) -> Result<Vec<SampleSweepRow>, ReconstructError> {
    if cfg.shots.is_empty() || cfg.shots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ReconstructError::InvalidParameter("shot list must be nonempty and ascending".into()));
    }
    if cfg.seeds == 0 || cfg.n == 0 {
        return Err(ReconstructError::InvalidParameter("need n ≥ 1 and at least one seed".into()));
    }
    let mut sizes: Vec<usize> = cfg.window_sizes.clone();
    if cfg.full_state && !sizes.contains(&cfg.n) {
        sizes.push(cfg.n);
    }
    if let Some(&bad) = sizes.iter().find(|&&m| m == 0 || m > cfg.n || m > MAX_WINDOW) {
        return Err(ReconstructError::InvalidParameter(format!(
            "window size {bad} not in 1..={}",
            cfg.n.min(MAX_WINDOW)
        )));
    }
    let groups: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&m| combinations(cfg.n, m)).collect();
    let subsets: Vec<Vec<usize>> = groups.iter().flatten().cloned().collect();
    // fid[size][shots][seed], dist[size][shots][seed]
    let mut fid = vec![vec![Vec::with_capacity(cfg.seeds); cfg.shots.len()]; sizes.len()];
    let mut dist = fid.clone();
    for s in 0..cfg.seeds {
        let state = haar_state(cfg.n, &mut stream(cfg.seed, Domain::Experiment, s as u64));
        let ideal: Vec<DensityMatrix> = subsets.iter().map(|w| state.reduced_density(w)).collect::<Result<_, _>>()?;
        for (j, &shots) in cfg.shots.iter().enumerate() {
            let mut rng = stream(derive_seed(cfg.seed, s as u64), Domain::Experiment, j as u64);
            let est = state_tomography(&state, &subsets, shots, &mut rng)?;
            let mut offset = 0;
            for (g, windows) in groups.iter().enumerate() {
                let (mut f, mut t) = (0.0, 0.0);
                for w in 0..windows.len() {
                    let e = &est[offset + w];
                    f += relative_fidelity(&project_to_physical(e), &ideal[offset + w])?;
                    t += trace_distance(&e.matrix, &ideal[offset + w])?;
                }
                fid[g][j].push(f / windows.len() as f64);
                dist[g][j].push(t / windows.len() as f64);
                offset += windows.len();
            }
        }
    }
    let mut rows = Vec::new();
    for (g, &m) in sizes.iter().enumerate() {
        for (j, &shots) in cfg.shots.iter().enumerate() {
            let (mean, std) = mean_std(&fid[g][j]);
            rows.push(SampleSweepRow {
                m,
                n_shots: shots,
                mean_fidelity: mean,
                std,
                median_trace_distance: median(&dist[g][j]),
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `log10 y` against `log10 x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.log10()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.log10()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSweepConfig {
    /// Even; qubits are paired as `(0,1), (2,3), …` in every layer.
    pub n: usize,
    pub depth: usize,
    pub gammas: Vec<u8>,
    pub seeds: usize,
    pub seed: u64,
    /// Shots per layer; exact outcome distributions when absent.
    pub shots: Option<u64>,
}

impl Default for NoiseSweepConfig {
    fn default() -> Self {
        NoiseSweepConfig { n: 2, depth: 10, gammas: vec![0, 1, 2, 3, 4, 5], seeds: 10, seed: 0, shots: None }
    }
}

/// `fidelity` is the product of per-layer Choi-state fidelities up to
/// `depth`; `circuit_fidelity` compares the composed learned and hidden
/// unitaries, `|tr(C† Ĉ)|² / 4^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSweepRow {
    pub gamma: u8,
    pub depth: usize,
    pub median_fidelity: f64,
    pub mean_fidelity: f64,
    pub median_circuit_fidelity: f64,
}

/// Hidden circuit of Haar-random two-qubit blocks on `(2b, 2b+1)`.
pub fn haar_pair_circuit<R: Rng + ?Sized>(
    n: usize,
    depth: usize,
    rng: &mut R,
) -> Result<LayeredCircuit, ReconstructError> {
    let layers = (1..=depth)
        .map(|k| {
            let blocks = (0..n / 2)
                .map(|b| Ok(Block::pair(2 * b, 2 * b + 1, Gate::new(format!("U{k}.{b}"), haar_unitary(4, rng))?)))
                .collect::<Result<Vec<_>, ReconstructError>>()?;
            Ok(Layer::new(n, blocks)?)
        })
        .collect::<Result<Vec<_>, ReconstructError>>()?;
    Ok(LayeredCircuit::new(n, layers)?)
}

struct NoiseTrace {
    layer_fidelity: Vec<f64>,
    circuit_fidelity: Vec<f64>,
}

/// Learns every layer of `hidden` as an arbitrary unitary per pair block,
/// perturbing each window estimate before extraction. Perturbation
/// directions depend on `(seed, layer, window)` only.
fn continuous_learn(
    hidden: &LayeredCircuit,
    gamma: u8,
    shots: Option<u64>,
    seed: u64,
) -> Result<NoiseTrace, ReconstructError> {
    let n = hidden.n();
    let profile = DeviceProfile::new(hidden.clone(), 1.0)?;
    let device = SimulatedDevice::new(profile, NoiseConfig::default(), derive_seed(seed, 1))?;
    let subsets: Vec<Vec<usize>> = (0..n / 2).map(|b| vec![2 * b, 2 * b + 1, 2 * b + n, 2 * b + 1 + n]).collect();
    let opts = LearnOptions {
        shots: shots.unwrap_or(1),
        sampling: if shots.is_some() { Sampling::Shots } else { Sampling::Exact },
        seed,
        ..LearnOptions::default()
    };
    let mut learned = LayeredCircuit::empty(n);
    let mut layer_fidelity = Vec::new();
    let mut circuit_fidelity = Vec::new();
    for k in 1..=hidden.depth() {
        let prefix = learned.inverse();
        let mut acc = TomoAccumulator::new(n, subsets.clone())?;
        {
            let mut run = device.program(&prefix, k)?;
            crate::reconstruct::collect_records(run.as_mut(), n, k, &opts, &mut acc)?;
        }
        let mut f = 1.0;
        let mut blocks = Vec::new();
        for (w, est) in acc.estimates().into_iter().enumerate() {
            let mut rng = stream(seed, Domain::RdmNoise, (k as u64) << 32 | w as u64);
            let noisy = perturb_rdm(&est.matrix, gamma, &mut rng);
            let truth = &hidden.layers()[k - 1].blocks()[w].gate;
            f *= relative_fidelity(&noisy, &choi_density(truth.matrix(), 2))?;
            let u = nearest_unitary_from_choi(&noisy, 2);
            blocks.push(Block::pair(2 * w, 2 * w + 1, Gate::new(format!("V{k}.{w}"), u)?));
        }
        learned.push(Layer::new(n, blocks)?)?;
        layer_fidelity.push(f);
        let c = compose_unitary(hidden, k)?;
        let c_hat = compose_unitary(&learned, k)?;
        let overlap = (c.adjoint() * c_hat).trace().norm() / (1usize << n) as f64;
        circuit_fidelity.push(overlap * overlap);
    }
    Ok(NoiseTrace { layer_fidelity, circuit_fidelity })
}

pub fn sweep_noise(cfg: &NoiseSweepConfig) -> Result<Vec<NoiseSweepRow>, ReconstructError> {
    if cfg.n == 0 || !cfg.n.is_multiple_of(2) {
        return Err(ReconstructError::InvalidParameter(format!("n = {} must be even and positive", cfg.n)));
    }
    if cfg.depth == 0 || cfg.seeds == 0 || cfg.gammas.is_empty() {
        return Err(ReconstructError::InvalidParameter("need depth ≥ 1, at least one seed and one γ".into()));
    }
    if let Some(&g) = cfg.gammas.iter().find(|&&g| g > 5) {
        return Err(ReconstructError::InvalidParameter(format!("γ = {g} not in 0..=5")));
    }
    if cfg.shots == Some(0) {
        return Err(ReconstructError::InvalidParameter("shots must be positive".into()));
    }
    let mut rows = Vec::new();
    let hidden: Vec<LayeredCircuit> = (0..cfg.seeds)
        .map(|s| haar_pair_circuit(cfg.n, cfg.depth, &mut stream(cfg.seed, Domain::Generator, s as u64)))
        .collect::<Result<_, _>>()?;
    for &gamma in &cfg.gammas {
        let traces = hidden
            .iter()
            .enumerate()
            .map(|(s, h)| continuous_learn(h, gamma, cfg.shots, derive_seed(cfg.seed, s as u64)))
            .collect::<Result<Vec<_>, _>>()?;
        for depth in 1..=cfg.depth {
            let fid: Vec<f64> = traces.iter().map(|t| t.layer_fidelity[..depth].iter().product()).collect();
            let circ: Vec<f64> = traces.iter().map(|t| t.circuit_fidelity[depth - 1]).collect();
            rows.push(NoiseSweepRow {
                gamma,
                depth,
                median_fidelity: median(&fid),
                mean_fidelity: mean_std(&fid).0,
                median_circuit_fidelity: median(&circ),
            });
        }
    }
    Ok(rows)
}

/// Random strict-layer circuit, reproducible from `seed`.
pub fn generate_circuit(
    n: usize,
    d: usize,
    gs: &GateSet,
    pair_prob: f64,
    seed: u64,
) -> Result<LayeredCircuit, ReconstructError> {
    if n == 0 || d == 0 {
        return Err(ReconstructError::InvalidParameter(format!("need n ≥ 1 and d ≥ 1, got n = {n}, d = {d}")));
    }
    if !(0.0..=1.0).contains(&pair_prob) {
        return Err(ReconstructError::InvalidParameter(format!("pair probability {pair_prob} not in [0, 1]")));
    }
    Ok(random_circuit(n, d, gs, pair_prob, &mut stream(seed, Domain::Generator, 0))?)
}
