//! Command-line front end: circuit reconstruction, tomography and noise
//! sweeps, gate-set resolution and random circuit generation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use qverify::circuit::{
    emit_circuit, parse_circuit, parse_gate_set, resolution_report, ConfigClass, GateSet, Resolution,
};
use qverify::device::{DeviceProfile, InterruptibleDevice, NoiseConfig, SimulatedDevice};
use qverify::experiments::{generate_circuit, sweep_noise, sweep_samples, NoiseSweepConfig, SampleSweepConfig};
use qverify::reconstruct::{
    learn_multi, LearnOptions, Matching, Mode, ReconstructError, ReconstructionReport, Sampling,
};
use qverify::tomo::{required_samples, SampleBound};

pub const LAYERS_CSV: &str = "layers_v1.csv";
pub const REPORT_JSON: &str = "report.json";
pub const SWEEP_SAMPLES_CSV: &str = "sweep_samples_v1.csv";
pub const SWEEP_NOISE_CSV: &str = "sweep_noise_v1.csv";

pub const LAYERS_HEADER: [&str; 9] = ["layer", "group", "qubit", "gate", "pur", "pur_theory", "fid", "dis", "res"];
pub const SWEEP_SAMPLES_HEADER: [&str; 5] = ["m", "N", "mean_fidelity", "std", "median_trace_distance"];
pub const SWEEP_NOISE_HEADER: [&str; 5] =
    ["gamma", "depth", "median_fidelity", "mean_fidelity", "median_circuit_fidelity"];

/// Default gate set when none is given: `{I, H, X, Y, Z, CNOT}`.
const DEFAULT_GATES: &str = "I,H,X,Y,Z,CNOT";

#[derive(Debug, Parser)]
#[command(name = "qverify", version, about = "Reconstruct layered circuits on an interruptible simulated device")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn every layer of the circuit in a circuit file.
    Reconstruct(ReconstructArgs),
    /// Tomography accuracy against shot count on Haar-random states.
    SweepSamples(SweepSamplesArgs),
    /// Learned-circuit fidelity against depth under perturbed estimates.
    SweepNoise(SweepNoiseArgs),
    /// Configuration class inventory and resolution of a gate set.
    Resolution(ResolutionArgs),
    /// Write a random strict-layer circuit file.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Hardware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatchingArg {
    Threshold,
    Nearest,
}

/// Where the verifier's gate set comes from.
#[derive(Debug, Args)]
pub struct GateSetArgs {
    /// Gate-set file `{"singles": [...], "doubles": [...]}`.
    #[arg(long, value_name = "FILE", conflicts_with = "gates")]
    pub gateset: Option<PathBuf>,
    /// Comma-separated built-in gate names.
    #[arg(long, value_delimiter = ',')]
    pub gates: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Circuit file; may carry `t` and a `noise` object next to the circuit.
    #[arg(long, value_name = "FILE")]
    pub circuit: PathBuf,
    /// Gate-set file for the verifier; defaults to the circuit's own set.
    #[arg(long, value_name = "FILE")]
    pub gateset: Option<PathBuf>,
    /// Shots per layer. Without it, `--delta` sizes the budget from the
    /// sample bound, and otherwise 8192 shots per basis setting are used.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Matching tolerance; defaults to 0.9 times the gate-set resolution.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Failure probability for sizing the shot budget.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Multiplier on the sample bound used with `--delta`.
    #[arg(long, default_value_t = 1.0)]
    pub bound_scale: f64,
    #[arg(long, env = "QVERIFY_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = MatchingArg::Threshold)]
    pub matching: MatchingArg,
    /// Depolarizing probability per gate; overrides the circuit file.
    #[arg(long)]
    pub noise_p: Option<f64>,
    /// Perturbation exponent for estimated window states; overrides the file.
    #[arg(long)]
    pub rdm_gamma: Option<u8>,
    /// Time per layer; overrides the file.
    #[arg(long)]
    pub t: Option<f64>,
    /// Apply gate noise to the inverse prefix as well.
    #[arg(long)]
    pub noisy_prefix: bool,
    /// Use exact outcome distributions instead of sampled shots.
    #[arg(long)]
    pub exact: bool,
    /// Report each strict layer as its own group.
    #[arg(long)]
    pub ungrouped: bool,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepSamplesArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Window sizes.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
    pub m: Vec<usize>,
    /// Ascending shot counts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000])]
    pub shots: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    pub seeds: usize,
    #[arg(long, env = "QVERIFY_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Skip the whole-state reference row.
    #[arg(long)]
    pub no_full_state: bool,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepNoiseArgs {
    /// Even qubit count.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0, 1, 2, 3, 4, 5])]
    pub gammas: Vec<u8>,
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, env = "QVERIFY_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Shots per layer; exact outcome distributions when absent.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ResolutionArgs {
    #[command(flatten)]
    pub gate_set: GateSetArgs,
    /// Take the gate set from a circuit file.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["gateset", "gates"])]
    pub circuit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub depth: usize,
    #[command(flatten)]
    pub gate_set: GateSetArgs,
    /// Probability of trying a two-qubit gate at each free qubit.
    #[arg(long, default_value_t = 0.5)]
    pub pair_prob: f64,
    #[arg(long, env = "QVERIFY_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// 1 for matching failures, 2 for everything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let matched =
        err.chain().any(|e| e.downcast_ref::<ReconstructError>().is_some_and(ReconstructError::is_match_failure));
    if matched {
        1
    } else {
        2
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Reconstruct(a) => cmd_reconstruct(&a).map(|_| ()),
        Command::SweepSamples(a) => cmd_sweep_samples(&a),
        Command::SweepNoise(a) => cmd_sweep_noise(&a),
        Command::Resolution(a) => cmd_resolution(&a, &mut std::io::stdout().lock()),
        Command::Generate(a) => cmd_generate(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_gate_set(args: &GateSetArgs) -> Result<GateSet> {
    if let Some(path) = &args.gateset {
        return parse_gate_set(&read(path)?).with_context(|| format!("parsing gate set {}", path.display()));
    }
    let names: Vec<String> = match &args.gates {
        Some(g) => g.clone(),
        None => DEFAULT_GATES.split(',').map(str::to_string).collect(),
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(GateSet::from_builtin_names(&refs)?)
}

/// Device-side settings that may sit next to the circuit in its file.
struct FileExtras {
    t: f64,
    noise: NoiseConfig,
}

fn file_extras(text: &str) -> Result<FileExtras> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let t = match value.get("t") {
        None => 1.0,
        Some(v) => v.as_f64().context("\"t\" must be a number")?,
    };
    let noise = match value.get("noise") {
        None => NoiseConfig::default(),
        Some(v) => serde_json::from_value(v.clone()).context("invalid \"noise\" object")?,
    };
    Ok(FileExtras { t, noise })
}

fn create_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn default_eps(gs: &GateSet) -> Result<f64> {
    Ok(match resolution_report(gs)?.resolution {
        Resolution::Finite(d) => 0.9 * d,
        Resolution::Infinite => 0.5,
    })
}

pub fn cmd_reconstruct(a: &ReconstructArgs) -> Result<ReconstructionReport> {
    let text = read(&a.circuit)?;
    let doc = parse_circuit(&text).with_context(|| format!("parsing circuit {}", a.circuit.display()))?;
    let extras = file_extras(&text)?;
    let gs = match &a.gateset {
        Some(p) => parse_gate_set(&read(p)?).with_context(|| format!("parsing gate set {}", p.display()))?,
        None => doc.gate_set.clone(),
    };
    let mut noise = extras.noise;
    if let Some(p) = a.noise_p {
        noise.depolarizing_p = p;
    }
    if let Some(g) = a.rdm_gamma {
        noise.rdm_gamma = g;
    }
    noise.noisy_prefix |= a.noisy_prefix;
    noise.validate()?;
    let t = a.t.unwrap_or(extras.t);
    let eps = match a.eps {
        Some(e) => e,
        None => default_eps(&gs)?,
    };
    let (n, d) = (doc.circuit.n(), doc.circuit.depth());
    let shots = match (a.shots, a.delta) {
        (Some(s), _) => s,
        (None, Some(delta)) => {
            required_samples(SampleBound::AllLayers { n: n as u64, d: d as u64 }, eps, delta, a.bound_scale)?
        }
        (None, None) => LearnOptions::default().shots,
    };
    let opts = LearnOptions {
        shots,
        eps,
        mode: match a.mode {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Hardware => Mode::Hardware,
        },
        matching: match a.matching {
            MatchingArg::Threshold => Matching::Threshold,
            MatchingArg::Nearest => Matching::Nearest,
        },
        sampling: if a.exact { Sampling::Exact } else { Sampling::Shots },
        seed: a.seed,
        rdm_gamma: noise.rdm_gamma,
        groups: (!a.ungrouped).then(|| doc.circuit.groups().to_vec()),
        ..LearnOptions::default()
    };
    opts.validate()?;
    let device = SimulatedDevice::new(DeviceProfile::new(doc.circuit.clone(), t)?, noise, a.seed)?;
    info!("learning {d} layers on {n} qubits, {shots} shots per layer, eps = {eps}");
    let report = learn_multi(&device, &gs, &opts)?;
    info!("device time {} (t = {})", report.ledger.total_time, device.time_per_layer());

    create_out_dir(&a.out)?;
    let json = serde_json::to_string_pretty(&report)?;
    fs::write(a.out.join(REPORT_JSON), json + "\n")?;
    let mut rows = Vec::new();
    for l in &report.per_layer {
        for q in 0..n {
            let block = l.structure.iter().position(|b| b.contains(&q)).context("qubit missing from layer")?;
            rows.push(vec![
                l.layer.to_string(),
                l.group.to_string(),
                q.to_string(),
                l.gates[block].clone(),
                l.purity[q].to_string(),
                l.theory_purity[q].to_string(),
                l.relative_fidelity[q].to_string(),
                l.trace_distance[q].to_string(),
                l.residual[q].map(|r| r.to_string()).unwrap_or_default(),
            ]);
        }
    }
    write_csv(&a.out.join(LAYERS_CSV), &LAYERS_HEADER, &rows)?;
    Ok(report)
}

pub fn cmd_sweep_samples(a: &SweepSamplesArgs) -> Result<()> {
    let cfg = SampleSweepConfig {
        n: a.n,
        window_sizes: a.m.clone(),
        shots: a.shots.clone(),
        seeds: a.seeds,
        seed: a.seed,
        full_state: !a.no_full_state,
    };
    let rows: Vec<Vec<String>> = sweep_samples(&cfg)?
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                r.n_shots.to_string(),
                r.mean_fidelity.to_string(),
                r.std.to_string(),
                r.median_trace_distance.to_string(),
            ]
        })
        .collect();
    create_out_dir(&a.out)?;
    write_csv(&a.out.join(SWEEP_SAMPLES_CSV), &SWEEP_SAMPLES_HEADER, &rows)
}

pub fn cmd_sweep_noise(a: &SweepNoiseArgs) -> Result<()> {
    let cfg = NoiseSweepConfig {
        n: a.n,
        depth: a.depth,
        gammas: a.gammas.clone(),
        seeds: a.seeds,
        seed: a.seed,
        shots: a.shots,
    };
    let rows: Vec<Vec<String>> = sweep_noise(&cfg)?
        .iter()
        .map(|r| {
            vec![
                r.gamma.to_string(),
                r.depth.to_string(),
                r.median_fidelity.to_string(),
                r.mean_fidelity.to_string(),
                r.median_circuit_fidelity.to_string(),
            ]
        })
        .collect();
    create_out_dir(&a.out)?;
    write_csv(&a.out.join(SWEEP_NOISE_CSV), &SWEEP_NOISE_HEADER, &rows)
}

pub fn cmd_resolution(a: &ResolutionArgs, out: &mut dyn Write) -> Result<()> {
    let gs = match &a.circuit {
        Some(p) => parse_circuit(&read(p)?).with_context(|| format!("parsing circuit {}", p.display()))?.gate_set,
        None => load_gate_set(&a.gate_set)?,
    };
    let report = resolution_report(&gs)?;
    writeln!(out, "class\traw\tdistinct")?;
    for (i, class) in ConfigClass::ALL.iter().enumerate() {
        writeln!(out, "{class:?}\t{}\t{}", report.raw_counts[i], report.distinct_counts[i])?;
    }
    writeln!(out, "d_C\t{}", report.resolution)?;
    if let Some((x, y, dist)) = &report.closest {
        writeln!(out, "closest\t{x}\t{y}\t{dist}")?;
    }
    Ok(())
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let gs = load_gate_set(&a.gate_set)?;
    if a.n == 0 || a.depth == 0 {
        bail!("need --n ≥ 1 and --depth ≥ 1");
    }
    let c = generate_circuit(a.n, a.depth, &gs, a.pair_prob, a.seed)?;
    let text = emit_circuit(&c, &gs) + "\n";
    match &a.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qverify::circuit::CircuitError;

    #[test]
    fn match_failures_exit_with_one() {
        let e = anyhow::Error::new(ReconstructError::NoMatch { layer: Some(2), qubit: 0, nearest: vec![] });
        assert_eq!(exit_code(&e), 1);
        assert_eq!(exit_code(&e.context("learning")), 1);
        let e = anyhow::Error::new(ReconstructError::InvalidParameter("eps".into()));
        assert_eq!(exit_code(&e), 2);
        assert_eq!(exit_code(&anyhow::Error::new(CircuitError::EmptyGateSet)), 2);
    }

    #[test]
    fn extras_default_when_absent() {
        let x = file_extras(r#"{"n": 1}"#).unwrap();
        assert_eq!(x.t, 1.0);
        assert_eq!(x.noise, NoiseConfig::default());
        let x = file_extras(r#"{"t": 3, "noise": {"depolarizing_p": 0.1, "rdm_gamma": 2}}"#).unwrap();
        assert_eq!((x.t, x.noise.depolarizing_p, x.noise.rdm_gamma), (3.0, 0.1, 2));
        assert!(file_extras(r#"{"t": "slow"}"#).is_err());
    }
}
