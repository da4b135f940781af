use log::{debug, info};
use serde::Serialize;

use crate::circuit::{
    choi_density, circuit_to_value, Block, ConfigClass, ConfigSource, GateSet, Layer, LayeredCircuit, Resolution,
};
use crate::device::{DeviceRun, InterruptibleDevice, ShotRecord, TimeLedger};
use crate::qcore::rng::{stream, Domain};
use crate::qcore::{partial_trace, purity, relative_fidelity, trace_distance, DensityMatrix, Outcome, PauliBasis};
use crate::tomo::{default_subsets, qubit_subsets, RdmEstimate, RecordSet, TomoAccumulator, LOW_COUNT_WARNING};

use super::matching::{
    match_single_refs, match_two_qubit_refs, minimize_residual, single_distances, two_qubit_distances, References,
};
use super::noise::perturb_rdm;
use super::prep::{all_preps, prep_init};
use super::{LearnOptions, Matching, Mode, ReconstructError, Sampling};

/// Per-layer diagnostics. Per-qubit vectors are indexed by qubit; the
/// residual is absent for qubits covered by a two-qubit gate.
#[derive(Debug, Clone, Serialize)]
pub struct LayerReport {
    pub layer: usize,
    pub group: usize,
    pub structure: Vec<Vec<usize>>,
    pub gates: Vec<String>,
    pub distances: Vec<f64>,
    pub purity: Vec<f64>,
    pub theory_purity: Vec<f64>,
    pub relative_fidelity: Vec<f64>,
    pub trace_distance: Vec<f64>,
    pub residual: Vec<Option<f64>>,
    pub warnings: Vec<String>,
    /// Raw window estimates before any synthetic perturbation.
    #[serde(skip)]
    pub estimates: Vec<RdmEstimate>,
    /// Window matrices the matching actually saw.
    #[serde(skip)]
    pub matched_estimates: Vec<DensityMatrix>,
    #[serde(skip)]
    pub records: Option<RecordSet>,
}

#[derive(Debug, Clone)]
pub struct LayerOutcome {
    pub layer: Layer,
    pub report: LayerReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerSummary {
    pub total_time_units: u64,
    pub t: f64,
    pub total_time: String,
    pub shots: u64,
    pub per_shot_layers: std::collections::BTreeMap<usize, u64>,
}

impl LedgerSummary {
    pub fn new(ledger: &TimeLedger, t: f64) -> LedgerSummary {
        LedgerSummary {
            total_time_units: ledger.units,
            t,
            total_time: format!("{}t", ledger.units),
            shots: ledger.shots(),
            per_shot_layers: ledger.per_shot_layers.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub circuit: serde_json::Value,
    pub mode: Mode,
    pub resolution: Option<f64>,
    pub eps: f64,
    pub per_layer: Vec<LayerReport>,
    pub warnings: Vec<String>,
    pub ledger: LedgerSummary,
    #[serde(skip)]
    pub learned: LayeredCircuit,
}

/// Feeds the records of one programmed run into `acc`; returns them as well
/// when `opts.keep_records` is set.
pub fn collect(
    run: &mut dyn DeviceRun,
    n: usize,
    k: usize,
    opts: &LearnOptions,
    acc: &mut TomoAccumulator,
) -> Result<Option<RecordSet>, ReconstructError> {
    let mut kept = opts.keep_records.then(|| RecordSet::new(n));
    let mut keep = |rec: ShotRecord, kept: &mut Option<RecordSet>| -> Result<(), ReconstructError> {
        acc.add(&rec)?;
        if let Some(rs) = kept.as_mut() {
            rs.push(rec)?;
        }
        Ok(())
    };
    match opts.sampling {
        Sampling::Shots => {
            for i in 0..opts.shots {
                let shot_id = (k as u64 - 1) * opts.shots + i;
                let mut rng = stream(opts.seed, Domain::Verifier, shot_id);
                let prep = prep_init(n, &mut rng);
                let basis = PauliBasis::random(n, &mut rng);
                let outcome = run.execute(&prep.prep, &basis, shot_id)?;
                let rec = ShotRecord {
                    shot_id,
                    principal_basis: basis,
                    principal_outcome: outcome,
                    ancilla_basis: prep.ancilla_basis,
                    ancilla_outcome: prep.ancilla_outcome,
                    weight: 1.0,
                };
                keep(rec, &mut kept)?;
            }
        }
        Sampling::Exact => {
            let bases = PauliBasis::all(n);
            let norm = (6f64 * 3.0).powi(n as i32);
            let mut id = 0;
            for prep in all_preps(n) {
                for basis in &bases {
                    let dist = run.exact_distribution(&prep.prep, basis)?;
                    for (bits, p) in dist.into_iter().enumerate() {
                        if p <= 0.0 {
                            continue;
                        }
                        let rec = ShotRecord {
                            shot_id: id,
                            principal_basis: basis.clone(),
                            principal_outcome: Outcome::from_bits(bits, n),
                            ancilla_basis: prep.ancilla_basis.clone(),
                            ancilla_outcome: prep.ancilla_outcome.clone(),
                            weight: p / norm,
                        };
                        id += 1;
                        keep(rec, &mut kept)?;
                    }
                }
            }
        }
    }
    Ok(kept)
}

/// Ideal single-qubit Choi marginal of each qubit under `layer`.
fn theory_marginals(layer: &Layer, n: usize) -> Vec<DensityMatrix> {
    let mut out = vec![DensityMatrix::maximally_mixed(1); n];
    for b in layer.blocks() {
        let rho = choi_density(b.gate.matrix(), b.qubits.len());
        if b.qubits.len() == 1 {
            out[b.qubits[0]] = rho;
        } else {
            out[b.qubits[0]] = partial_trace(&rho, &[0, 2]).expect("valid wires");
            out[b.qubits[1]] = partial_trace(&rho, &[1, 3]).expect("valid wires");
        }
    }
    out
}

fn block_label(b: &Block) -> String {
    match b.qubits.as_slice() {
        [_] => b.gate.name().to_string(),
        [a, c] => format!("{}({a}→{c})", b.gate.name()),
        _ => unreachable!("blocks cover one or two qubits"),
    }
}

/// Windows containing `q`, ordered by the partner qubit.
fn windows_of(n: usize, q: usize) -> Vec<(usize, usize)> {
    (0..n)
        .filter(|&p| p != q)
        .map(|p| {
            let (i, j) = if p < q { (p, q) } else { (q, p) };
            let w = i * (2 * n - i - 1) / 2 + (j - i - 1);
            (w, usize::from(q == j))
        })
        .collect()
}

/// Two-wire `(q, q')` marginal of a pair-window matrix, `pos` being the
/// position of `q` in the window.
fn pair_to_qubit(rho: &DensityMatrix, pos: usize) -> Result<DensityMatrix, ReconstructError> {
    Ok(partial_trace(rho, &[pos, pos + 2])?)
}

struct Assignment {
    blocks: Vec<Block>,
    residual: Vec<Option<f64>>,
    warnings: Vec<String>,
}

fn sorted_nearest(mut v: Vec<(String, f64)>) -> Vec<(String, f64)> {
    v.sort_by(|a, b| a.1.total_cmp(&b.1));
    v
}

fn assign_strict(
    n: usize,
    windows: &[DensityMatrix],
    gs: &GateSet,
    refs: &References,
    opts: &LearnOptions,
) -> Result<Assignment, ReconstructError> {
    let mut covered = vec![false; n];
    let mut blocks = Vec::new();
    if n >= 2 {
        let subsets = default_subsets(n);
        for (w, s) in subsets.iter().enumerate() {
            let (i, j) = (s[0], s[1]);
            let hit = match opts.matching {
                Matching::Threshold => match_two_qubit_refs(&windows[w], gs, refs, opts.eps)?,
                Matching::Nearest => {
                    let nearest = refs
                        .elements
                        .iter()
                        .map(|e| Ok((e, trace_distance(&windows[w], &e.state)?)))
                        .collect::<Result<Vec<_>, ReconstructError>>()?
                        .into_iter()
                        .min_by(|a, b| a.1.total_cmp(&b.1));
                    match nearest {
                        Some((e, d)) if e.class == ConfigClass::C2 => match e.sources[0] {
                            ConfigSource::C2(g) => Some((g, d)),
                            _ => unreachable!("C2 elements come from directed doubles"),
                        },
                        _ => None,
                    }
                }
            };
            if let Some((dg, _)) = hit {
                for q in [i, j] {
                    if covered[q] {
                        return Err(ReconstructError::OverlappingAssignment { layer: None, qubit: q });
                    }
                    covered[q] = true;
                }
                let gate = gs.doubles()[dg.index].clone();
                blocks.push(if dg.reversed { Block::pair(j, i, gate) } else { Block::pair(i, j, gate) });
            }
        }
    }
    for (q, _) in covered.iter().enumerate().filter(|(_, &c)| !c) {
        let candidates: Vec<DensityMatrix> = if n == 1 {
            vec![windows[0].clone()]
        } else {
            windows_of(n, q).into_iter().map(|(w, pos)| pair_to_qubit(&windows[w], pos)).collect::<Result<_, _>>()?
        };
        let mut found = None;
        match opts.matching {
            Matching::Threshold => {
                for c in &candidates {
                    if let Some(hit) = match_single_refs(c, gs, refs, opts.eps)? {
                        found = Some(hit);
                        break;
                    }
                }
            }
            Matching::Nearest => {
                found = single_distances(&candidates[0], refs)?.into_iter().min_by(|a, b| a.1.total_cmp(&b.1));
            }
        }
        match found {
            Some((g, _)) => {
                blocks.push(Block::single(q, gs.singles()[g].clone()));
            }
            None => {
                let nearest = single_distances(&candidates[0], refs)?
                    .into_iter()
                    .map(|(g, d)| (gs.singles()[g].name().to_string(), d))
                    .collect();
                return Err(ReconstructError::NoMatch { layer: None, qubit: q, nearest: sorted_nearest(nearest) });
            }
        }
    }
    Ok(Assignment { blocks, residual: vec![None; n], warnings: Vec::new() })
}

fn assign_hardware(
    n: usize,
    marginals: &[DensityMatrix],
    gs: &GateSet,
    refs: &References,
    opts: &LearnOptions,
) -> Result<Assignment, ReconstructError> {
    let purities = marginals.iter().map(purity).collect::<Result<Vec<_>, _>>()?;
    let flagged: Vec<usize> = (0..n).filter(|&q| purities[q] < opts.purity_threshold).collect();
    let mut blocks = Vec::new();
    let mut residual = vec![None; n];
    let mut warnings = Vec::new();
    match flagged.as_slice() {
        [] => {}
        &[a, b] => {
            let mut best: Option<(crate::circuit::DirectedGate, f64)> = None;
            for (dg, rho) in &refs.directed {
                let d = trace_distance(&marginals[a], &partial_trace(rho, &[0, 2])?)?
                    + trace_distance(&marginals[b], &partial_trace(rho, &[1, 3])?)?;
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((*dg, d));
                }
            }
            let Some((dg, _)) = best else {
                return Err(ReconstructError::NoMatch { layer: None, qubit: a, nearest: Vec::new() });
            };
            let gate = gs.doubles()[dg.index].clone();
            blocks.push(if dg.reversed { Block::pair(b, a, gate) } else { Block::pair(a, b, gate) });
        }
        _ => return Err(ReconstructError::UnsupportedFlagCount { layer: None, flagged }),
    }
    for q in (0..n).filter(|q| !flagged.contains(q)) {
        let m = minimize_residual(&marginals[q], gs.singles())?;
        if m.tie {
            warnings.push(format!("qubit {q}: residual tie, kept {}", gs.singles()[m.gate].name()));
        }
        blocks.push(Block::single(q, gs.singles()[m.gate].clone()));
        residual[q] = Some(m.residual);
    }
    Ok(Assignment { blocks, residual, warnings })
}

/// Learns hidden layer `k` given the inverse of the layers learned so far.
pub fn learn_single(
    device: &dyn InterruptibleDevice,
    gs: &GateSet,
    refs: &References,
    prefix: &LayeredCircuit,
    k: usize,
    opts: &LearnOptions,
) -> Result<LayerOutcome, ReconstructError> {
    learn_single_inner(device, gs, refs, prefix, k, opts).map_err(|e| e.at_layer(k))
}

fn learn_single_inner(
    device: &dyn InterruptibleDevice,
    gs: &GateSet,
    refs: &References,
    prefix: &LayeredCircuit,
    k: usize,
    opts: &LearnOptions,
) -> Result<LayerOutcome, ReconstructError> {
    opts.validate()?;
    let n = device.n_qubits();
    let subsets = match opts.mode {
        Mode::Strict => default_subsets(n),
        Mode::Hardware => qubit_subsets(n),
    };
    let mut acc = TomoAccumulator::new(n, subsets)?;
    let records = {
        let mut run = device.program(prefix, k)?;
        collect(run.as_mut(), n, k, opts, &mut acc)?
    };
    let estimates = acc.estimates();
    let mut warnings = Vec::new();
    for e in &estimates {
        let low = e.min_count();
        if opts.sampling == Sampling::Shots && low < LOW_COUNT_WARNING {
            warnings.push(format!("window {:?}: a Pauli string has only {low} compatible shots", e.subset));
        }
    }
    let matched: Vec<DensityMatrix> = estimates
        .iter()
        .enumerate()
        .map(|(w, e)| {
            let mut rng = stream(opts.seed, Domain::RdmNoise, (k as u64) << 32 | w as u64);
            perturb_rdm(&e.matrix, opts.rdm_gamma, &mut rng)
        })
        .collect();

    // physical single-qubit marginals for diagnostics
    let marginals: Vec<DensityMatrix> = match opts.mode {
        Mode::Hardware => matched.iter().map(|m| m.clip_to_physical()).collect(),
        Mode::Strict if n == 1 => vec![matched[0].clip_to_physical()],
        Mode::Strict => (0..n)
            .map(|q| {
                let (w, pos) = windows_of(n, q)[0];
                pair_to_qubit(&matched[w], pos).map(|m| m.clip_to_physical())
            })
            .collect::<Result<_, _>>()?,
    };

    let assignment = match opts.mode {
        Mode::Strict => assign_strict(n, &matched, gs, refs, opts)?,
        Mode::Hardware => assign_hardware(n, &marginals, gs, refs, opts)?,
    };
    warnings.extend(assignment.warnings);

    let layer = Layer::new(n, assignment.blocks)?;
    let mut distances = vec![0.0; layer.blocks().len()];
    let theory = theory_marginals(&layer, n);
    let mut residual = assignment.residual;
    for (slot, b) in distances.iter_mut().zip(layer.blocks()) {
        *slot = best_block_distance(b, &matched, &marginals, refs, gs, opts.mode, n)?;
    }
    if opts.mode == Mode::Strict {
        for b in layer.blocks() {
            if let [q] = b.qubits.as_slice() {
                let g = gs.singles().iter().position(|s| s == &b.gate).expect("assigned from the set");
                residual[*q] = Some(1.0 - crate::qcore::hs_inner(marginals[*q].matrix(), refs.singles[g].matrix()).re);
            }
        }
    }

    let report = LayerReport {
        layer: k,
        group: k,
        structure: layer.structure(),
        gates: layer.blocks().iter().map(block_label).collect(),
        distances,
        purity: marginals.iter().map(purity).collect::<Result<_, _>>()?,
        theory_purity: theory.iter().map(purity).collect::<Result<_, _>>()?,
        relative_fidelity: marginals
            .iter()
            .zip(&theory)
            .map(|(a, b)| relative_fidelity(a, b))
            .collect::<Result<_, _>>()?,
        trace_distance: marginals.iter().zip(&theory).map(|(a, b)| trace_distance(a, b)).collect::<Result<_, _>>()?,
        residual,
        warnings,
        estimates,
        matched_estimates: matched,
        records,
    };
    debug!("layer {k}: {:?}", report.gates);
    Ok(LayerOutcome { layer, report })
}

/// Distance of the estimate to the Choi state of an assigned block: the
/// pair-window distance (strict) or summed marginal distances (hardware)
/// for two-qubit blocks, and the two-wire distance for single-qubit blocks.
fn best_block_distance(
    b: &Block,
    matched: &[DensityMatrix],
    marginals: &[DensityMatrix],
    refs: &References,
    gs: &GateSet,
    mode: Mode,
    n: usize,
) -> Result<f64, ReconstructError> {
    match *b.qubits.as_slice() {
        [q] => {
            let g = gs.singles().iter().position(|s| s == &b.gate).expect("assigned from the set");
            let est = match mode {
                Mode::Hardware => marginals[q].clone(),
                Mode::Strict if n == 1 => matched[0].clone(),
                Mode::Strict => {
                    let (w, pos) = windows_of(n, q)[0];
                    pair_to_qubit(&matched[w], pos)?
                }
            };
            Ok(trace_distance(&est, &refs.singles[g])?)
        }
        [a, c] => {
            let (i, j) = (a.min(c), a.max(c));
            let reversed = a > c;
            let d = gs.doubles().iter().position(|g| g == &b.gate).expect("assigned from the set");
            let dg = crate::circuit::DirectedGate { index: d, reversed: reversed && !gs.is_symmetric(d) };
            let rho = &refs.directed.iter().find(|(x, _)| *x == dg).expect("directed instance exists").1;
            match mode {
                Mode::Strict => {
                    let w = i * (2 * n - i - 1) / 2 + (j - i - 1);
                    Ok(two_qubit_distances(&matched[w], refs)?
                        .into_iter()
                        .find(|(x, _)| *x == dg)
                        .map(|(_, d)| d)
                        .expect("directed instance exists"))
                }
                Mode::Hardware => Ok(trace_distance(&marginals[i], &partial_trace(rho, &[0, 2])?)?
                    + trace_distance(&marginals[j], &partial_trace(rho, &[1, 3])?)?),
            }
        }
        _ => unreachable!("blocks cover one or two qubits"),
    }
}

/// Learns every layer of the hidden circuit in order, undoing the layers
/// learned so far before each interruption.
pub fn learn_multi(
    device: &dyn InterruptibleDevice,
    gs: &GateSet,
    opts: &LearnOptions,
) -> Result<ReconstructionReport, ReconstructError> {
    opts.validate()?;
    let n = device.n_qubits();
    let d = device.depth();
    if let Some(g) = &opts.groups {
        if g.len() != d {
            return Err(ReconstructError::InvalidParameter(format!("{} group labels for depth {d}", g.len())));
        }
    }
    let refs = References::new(gs)?;
    let mut warnings = Vec::new();
    let resolution = match refs.resolution {
        Resolution::Finite(r) => Some(r),
        Resolution::Infinite => None,
    };
    if let Some(r) = resolution {
        if opts.eps >= r {
            warnings.push(format!("eps = {} is not below the gate-set resolution {r}", opts.eps));
        }
    }
    if opts.sampling == Sampling::Exact {
        warnings.push("exact outcome distributions were used; no device time was charged".into());
    }
    let before = device.ledger();
    let mut learned = LayeredCircuit::empty(n);
    let mut per_layer = Vec::with_capacity(d);
    for k in 1..=d {
        let prefix = learned.inverse();
        let out = learn_single(device, gs, &refs, &prefix, k, opts)?;
        learned.push(out.layer)?;
        let mut report = out.report;
        report.group = opts.groups.as_ref().map_or(k, |g| g[k - 1] + 1);
        info!("layer {k}/{d}: {}", report.gates.join(" "));
        per_layer.push(report);
    }
    if let Some(g) = &opts.groups {
        learned = learned.regrouped(g.clone())?;
    }
    let ledger = device.ledger().since(&before);
    Ok(ReconstructionReport {
        circuit: circuit_to_value(&learned, gs),
        mode: opts.mode,
        resolution,
        eps: opts.eps,
        per_layer,
        warnings,
        ledger: LedgerSummary::new(&ledger, device.time_per_layer()),
        learned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_circuit, CircuitDocument};
    use crate::device::{DeviceProfile, NoiseConfig, SimulatedDevice};

    fn doc(text: &str) -> CircuitDocument {
        parse_circuit(text).unwrap()
    }

    fn device(d: &CircuitDocument) -> SimulatedDevice {
        SimulatedDevice::new(DeviceProfile::new(d.circuit.clone(), 1.0).unwrap(), NoiseConfig::default(), 5).unwrap()
    }

    fn exact(mode: Mode) -> LearnOptions {
        LearnOptions { sampling: Sampling::Exact, mode, eps: 0.2, ..LearnOptions::default() }
    }

    #[test]
    fn exact_strict_reconstructs_fig6() {
        for text in [
            include_str!("../../../../circuits/fig6a.json"),
            include_str!("../../../../circuits/fig6b.json"),
            include_str!("../../../../circuits/fig6c.json"),
        ] {
            let d = doc(text);
            let dev = device(&d);
            let rep = learn_multi(&dev, &d.gate_set, &exact(Mode::Strict)).unwrap();
            assert_eq!(rep.learned.layers(), d.circuit.layers());
            assert_eq!(rep.ledger.total_time_units, 0);
            for l in &rep.per_layer {
                assert!(l.distances.iter().all(|&x| x < 1e-9), "{:?}", l.distances);
                for q in 0..2 {
                    assert!((l.purity[q] - l.theory_purity[q]).abs() < 1e-9);
                    assert!((l.relative_fidelity[q] - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn exact_hardware_reconstructs_fig6() {
        for text in [include_str!("../../../../circuits/fig6a.json"), include_str!("../../../../circuits/fig6c.json")] {
            let d = doc(text);
            let dev = device(&d);
            let rep = learn_multi(&dev, &d.gate_set, &exact(Mode::Hardware)).unwrap();
            assert_eq!(rep.learned.layers(), d.circuit.layers());
            for l in &rep.per_layer {
                let has_pair = l.structure.iter().any(|b| b.len() == 2);
                assert_eq!(l.residual.iter().all(Option::is_none), has_pair);
            }
        }
    }

    #[test]
    fn exact_strict_reconstructs_qft_groups() {
        let d = doc(include_str!("../../../../circuits/qft2.json"));
        let dev = device(&d);
        let opts = LearnOptions { groups: Some(d.circuit.groups().to_vec()), ..exact(Mode::Strict) };
        let rep = learn_multi(&dev, &d.gate_set, &opts).unwrap();
        assert_eq!(rep.learned, d.circuit);
        assert_eq!(rep.per_layer.last().unwrap().group, 5);
    }

    #[test]
    fn sampled_run_charges_the_ledger() {
        let d = doc(include_str!("../../../../circuits/fig6a.json"));
        let dev = device(&d);
        let opts = LearnOptions { shots: 20_000, eps: 0.2, seed: 9, mode: Mode::Hardware, ..LearnOptions::default() };
        let rep = learn_multi(&dev, &d.gate_set, &opts).unwrap();
        assert_eq!(rep.learned.layers(), d.circuit.layers());
        // layer k runs 2k - 1 layers per shot
        assert_eq!(rep.ledger.total_time_units, 20_000 * (1 + 3));
        assert_eq!(rep.ledger.total_time, "80000t");
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["per_layer"][1]["gates"][0], "CNOT(0→1)");
        assert!(json["per_layer"][0]["residual"][0].is_number());
    }

    #[test]
    fn sampled_runs_are_reproducible() {
        let d = doc(include_str!("../../../../circuits/fig6a.json"));
        let opts = LearnOptions { shots: 3000, eps: 0.3, seed: 4, mode: Mode::Hardware, ..LearnOptions::default() };
        let a = learn_multi(&device(&d), &d.gate_set, &opts).unwrap();
        let b = learn_multi(&device(&d), &d.gate_set, &opts).unwrap();
        assert_eq!(a.per_layer[0].distances, b.per_layer[0].distances);
    }

    #[test]
    fn too_few_shots_fail_cleanly() {
        let d = doc(include_str!("../../../../circuits/fig6a.json"));
        let opts = LearnOptions { shots: 40, eps: 0.05, seed: 1, ..LearnOptions::default() };
        let err = learn_multi(&device(&d), &d.gate_set, &opts).unwrap_err();
        assert!(err.is_match_failure(), "{err}");
        assert!(err.to_string().contains("layer 1"));
    }

    #[test]
    fn windows_of_orders_by_partner() {
        // n = 3 windows: (0,1) (0,2) (1,2)
        assert_eq!(windows_of(3, 0), vec![(0, 0), (1, 0)]);
        assert_eq!(windows_of(3, 1), vec![(0, 1), (2, 0)]);
        assert_eq!(windows_of(3, 2), vec![(1, 1), (2, 1)]);
    }
}
