//! Experiment orchestration: sweep crossover probabilities, replicate
//! trials, run every selected decoder on the same corrupted instance and
//! score edge accuracy against the clean signs.
//!
//! Seeds: the seed of trial `t` at degree index `c` and probability index
//! `p` is word `t` of the ChaCha8 stream `(c << 32) | p` under the base
//! seed (see [`derive_seed`]). Within a trial, sub-seed 0 drives graph
//! generation, 1 the channel flips and 2 the local-search start.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle_space::FundamentalCycleMatrix;
use crate::datagen::{bsc_flip, largest_component, sbm_signed, GroundTruth, SbmParams};
use crate::decode::{bit_flipping_decode, bp_decode, BitFlipConfig, BpConfig};
use crate::error::{Error, Result};
use crate::graph::{edge_accuracy, partition_codeword, Partition, SignedGraph};
use crate::hamming::{hamming_decode, Affinity, SearchConfig};
use crate::polblogs::load_polblogs;

/// Channel estimate handed to belief propagation when the sweep point is
/// `p = 0`, where the log-odds would be infinite.
pub const BP_MIN_CROSSOVER: f64 = 1e-6;

pub const CSV_HEADER: &str = "source,p,c,decoder,trial,seed,edge_accuracy,iterations,converged,runtime_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    BitFlip,
    Bp,
    HammingPlain,
    HammingTwoStep,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::BitFlip,
        DecoderKind::Bp,
        DecoderKind::HammingPlain,
        DecoderKind::HammingTwoStep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::BitFlip => "bit-flip",
            DecoderKind::Bp => "bp",
            DecoderKind::HammingPlain => "hamming-plain",
            DecoderKind::HammingTwoStep => "hamming-two-step",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecoderKind::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown decoder {s:?}")))
    }
}

pub fn parse_decoder_list(s: &str) -> Result<Vec<DecoderKind>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    /// One instance family per `(c_in, c_out)` pair.
    Sbm { n: usize, degrees: Vec<(f64, f64)> },
    Dataset { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub source: GraphSource,
    pub p_values: Vec<f64>,
    pub decoders: Vec<DecoderKind>,
    pub trials: usize,
    pub base_seed: u64,
    pub bit_flip: BitFlipConfig,
    pub bp: BpConfig,
    pub max_sweeps: usize,
    /// Record wall-clock time per decoder run. Off by default because it
    /// makes the output differ between runs.
    pub timing: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.p_values.is_empty() {
            return Err(Error::InvalidParameter("no crossover probabilities".into()));
        }
        if let Some(&p) = self.p_values.iter().find(|p| !(0.0..0.5).contains(*p)) {
            return Err(Error::InvalidProbability(p));
        }
        if self.decoders.is_empty() {
            return Err(Error::InvalidParameter("no decoders selected".into()));
        }
        if let GraphSource::Sbm { n, degrees } = &self.source {
            if degrees.is_empty() {
                return Err(Error::InvalidParameter("no (c_in, c_out) pairs".into()));
            }
            for &(c_in, c_out) in degrees {
                SbmParams { n: *n, c_in, c_out, seed: 0 }.validate()?;
            }
        }
        self.bit_flip.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub source: String,
    pub p: f64,
    /// Average degree of the SBM family; `None` for datasets.
    pub c: Option<f64>,
    pub decoder: DecoderKind,
    pub trial: usize,
    pub seed: u64,
    pub edge_accuracy: f64,
    pub iterations: usize,
    pub converged: bool,
    pub runtime_ms: Option<f64>,
}

/// Word `index` of ChaCha8 stream `stream` under `base`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

/// `start, start + step, …` up to `end` inclusive, rounded to 10 decimals.
pub fn p_range(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || end < start {
        return Err(Error::InvalidParameter(format!(
            "bad probability range {start}..{end} step {step}"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

struct Instance {
    graph: SignedGraph,
    truth: GroundTruth,
    h: Option<FundamentalCycleMatrix>,
}

fn needs_cycle_matrix(decoders: &[DecoderKind]) -> bool {
    decoders.iter().any(|d| matches!(d, DecoderKind::BitFlip | DecoderKind::Bp))
}

fn prepare(graph: SignedGraph, truth: GroundTruth, decoders: &[DecoderKind]) -> Result<Instance> {
    let (graph, _, truth) = largest_component(&graph, &truth.clean_weights.clone(), &truth)?;
    let h = if needs_cycle_matrix(decoders) && graph.node_count() > 0 {
        Some(FundamentalCycleMatrix::from_graph(&graph, 0)?)
    } else {
        None
    };
    Ok(Instance { graph, truth, h })
}

struct Task {
    c_index: usize,
    p_index: usize,
    trial: usize,
}

/// Runs every `(degree, p, trial)` point. Records come back ordered by
/// degree, probability, trial, then the listed decoder order, whatever
/// order the worker threads finish in.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    let (families, dataset) = match &spec.source {
        GraphSource::Sbm { degrees, .. } => (degrees.len(), None),
        GraphSource::Dataset { path } => {
            let d = load_polblogs(path)?;
            let tag = path
                .file_stem()
                .map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned());
            (1, Some((tag, prepare(d.graph, d.truth, &spec.decoders)?)))
        }
    };
    let tasks: Vec<Task> = (0..families)
        .flat_map(|c_index| {
            (0..spec.p_values.len()).flat_map(move |p_index| {
                (0..spec.trials).map(move |trial| Task { c_index, p_index, trial })
            })
        })
        .collect();
    let per_task: Vec<Vec<TrialRecord>> = tasks
        .par_iter()
        .map(|task| run_task(spec, task, dataset.as_ref()))
        .collect::<Result<_>>()?;
    Ok(per_task.into_iter().flatten().collect())
}

fn run_task(spec: &ExperimentSpec, task: &Task, dataset: Option<&(String, Instance)>) -> Result<Vec<TrialRecord>> {
    let p = spec.p_values[task.p_index];
    let stream = ((task.c_index as u64) << 32) | task.p_index as u64;
    let seed = derive_seed(spec.base_seed, stream, task.trial as u64);
    let generated;
    let (source, c, instance) = match (&spec.source, dataset) {
        (GraphSource::Sbm { n, degrees }, _) => {
            let (c_in, c_out) = degrees[task.c_index];
            let params = SbmParams {
                n: *n,
                c_in,
                c_out,
                seed: derive_seed(seed, 0, 0),
            };
            let (graph, truth) = sbm_signed(&params)?;
            generated = prepare(graph, truth, &spec.decoders)?;
            ("sbm".to_string(), Some(params.average_degree()), &generated)
        }
        (GraphSource::Dataset { .. }, Some((tag, inst))) => (tag.clone(), None, inst),
        (GraphSource::Dataset { .. }, None) => unreachable!("dataset loaded before tasks run"),
    };
    let clean = &instance.truth.clean_weights;
    let noisy = bsc_flip(clean, p, derive_seed(seed, 1, 0))?;
    let search_seed = derive_seed(seed, 2, 0);
    let graph = &instance.graph;

    let mut records = Vec::with_capacity(spec.decoders.len());
    for &decoder in &spec.decoders {
        let started = Instant::now();
        let (partition, iterations, converged): (Partition, usize, bool) = if graph.node_count() < 2 {
            (Partition::uniform(graph.node_count(), crate::graph::Side::First), 0, true)
        } else {
            match decoder {
                DecoderKind::BitFlip => {
                    let h = instance.h.as_ref().expect("cycle matrix built for flip decoders");
                    let r = bit_flipping_decode(graph, h, &noisy, &spec.bit_flip)?;
                    (r.partition, r.iterations, r.converged)
                }
                DecoderKind::Bp => {
                    let h = instance.h.as_ref().expect("cycle matrix built for BP");
                    let r = bp_decode(graph, h, &noisy, p.max(BP_MIN_CROSSOVER), &spec.bp)?;
                    (r.partition, r.iterations, r.converged)
                }
                DecoderKind::HammingPlain | DecoderKind::HammingTwoStep => {
                    let affinity = if decoder == DecoderKind::HammingPlain {
                        Affinity::Plain
                    } else {
                        Affinity::TwoStep
                    };
                    let cfg = SearchConfig {
                        max_sweeps: spec.max_sweeps,
                        ..SearchConfig::seeded(search_seed)
                    };
                    let r = hamming_decode(graph, &noisy, affinity, &cfg)?;
                    (r.partition, r.sweeps, true)
                }
            }
        };
        let runtime_ms = spec.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
        let decoded = partition_codeword(graph, &partition)?;
        records.push(TrialRecord {
            source: source.clone(),
            p,
            c,
            decoder,
            trial: task.trial,
            seed,
            edge_accuracy: edge_accuracy(&decoded, clean)?,
            iterations,
            converged,
            runtime_ms,
        });
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::io("csv output", std::io::Error::other(e));
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for r in records {
        w.write_record([
            r.source.clone(),
            r.p.to_string(),
            r.c.map(|c| c.to_string()).unwrap_or_default(),
            r.decoder.name().to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.edge_accuracy.to_string(),
            r.iterations.to_string(),
            r.converged.to_string(),
            r.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io("csv output", e))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub source: String,
    pub c: Option<f64>,
    pub p: f64,
    pub decoder: DecoderKind,
    pub trials: usize,
    pub mean_accuracy: f64,
    /// `1.96 · s / √trials`, absent with fewer than two trials.
    pub ci95_half_width: Option<f64>,
}

/// Mean accuracy and normal-approximation 95% half-width per
/// `(source, c, p, decoder)`, in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, Option<u64>, u64, DecoderKind)> = Vec::new();
    let mut groups: HashMap<(String, Option<u64>, u64, DecoderKind), Vec<f64>> = HashMap::new();
    for r in records {
        let key = (r.source.clone(), r.c.map(f64::to_bits), r.p.to_bits(), r.decoder);
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r.edge_accuracy);
    }
    order
        .into_iter()
        .map(|key| {
            let xs = &groups[&key];
            let (mean, half) = mean_and_half_width(xs);
            SummaryRow {
                source: key.0,
                c: key.1.map(f64::from_bits),
                p: f64::from_bits(key.2),
                decoder: key.3,
                trials: xs.len(),
                mean_accuracy: mean,
                ci95_half_width: half,
            }
        })
        .collect()
}

pub fn mean_and_half_width(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, None);
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return (xs[0], Some(0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Some(1.96 * var.sqrt() / n.sqrt()))
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "source,c,p,decoder,trials,mean_accuracy,ci95_half_width")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{}",
            r.source,
            r.c.map(|c| c.to_string()).unwrap_or_default(),
            r.p,
            r.decoder,
            r.trials,
            r.mean_accuracy,
            r.ci95_half_width.map(|h| format!("{h:.6}")).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Experiment settings as given on the command line or in a `key=value`
/// file. Unset fields fall back to the defaults of [`Settings::to_spec`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub n: Option<usize>,
    pub c_in: Option<Vec<f64>>,
    pub c_out: Option<Vec<f64>>,
    pub p_start: Option<f64>,
    pub p_end: Option<f64>,
    pub p_step: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub decoders: Option<Vec<DecoderKind>>,
    pub dataset: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(line, format!("bad value {value:?} for {key}")))
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad number {t:?}")))
        })
        .collect()
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment line. Keys use
    /// underscores or dashes interchangeably (`c_in`, `c-in`).
    pub fn parse_config(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = i + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(lineno, format!("expected key=value, got {line:?}")));
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "n" => s.n = Some(parse_value(&key, value, lineno)?),
                "c_in" => s.c_in = Some(parse_f64_list(value)?),
                "c_out" => s.c_out = Some(parse_f64_list(value)?),
                "p_start" => s.p_start = Some(parse_value(&key, value, lineno)?),
                "p_end" => s.p_end = Some(parse_value(&key, value, lineno)?),
                "p_step" => s.p_step = Some(parse_value(&key, value, lineno)?),
                "trials" => s.trials = Some(parse_value(&key, value, lineno)?),
                "seed" => s.seed = Some(parse_value(&key, value, lineno)?),
                "decoders" => s.decoders = Some(parse_decoder_list(value)?),
                "dataset" => s.dataset = Some(PathBuf::from(value)),
                "out" => s.out = Some(PathBuf::from(value)),
                "timing" => s.timing = Some(parse_value(&key, value, lineno)?),
                _ => return Err(Error::parse(lineno, format!("unknown key {key:?}"))),
            }
        }
        Ok(s)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merged(self, other: Settings) -> Settings {
        Settings {
            n: other.n.or(self.n),
            c_in: other.c_in.or(self.c_in),
            c_out: other.c_out.or(self.c_out),
            p_start: other.p_start.or(self.p_start),
            p_end: other.p_end.or(self.p_end),
            p_step: other.p_step.or(self.p_step),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            decoders: other.decoders.or(self.decoders),
            dataset: other.dataset.or(self.dataset),
            out: other.out.or(self.out),
            timing: other.timing.or(self.timing),
        }
    }

    /// Defaults: `n = 2000`, `c_in = 8.5`, `c_out = 3.5`, `p` from 0.01 to
    /// 0.1 in steps of 0.01, 20 trials, seed 0, all decoders.
    pub fn to_spec(&self) -> Result<ExperimentSpec> {
        let source = match &self.dataset {
            Some(path) => GraphSource::Dataset { path: path.clone() },
            None => {
                let c_in = self.c_in.clone().unwrap_or_else(|| vec![8.5]);
                let c_out = self.c_out.clone().unwrap_or_else(|| vec![3.5]);
                if c_in.len() != c_out.len() {
                    return Err(Error::InvalidParameter(format!(
                        "c_in has {} values but c_out has {}",
                        c_in.len(),
                        c_out.len()
                    )));
                }
                GraphSource::Sbm {
                    n: self.n.unwrap_or(2000),
                    degrees: c_in.into_iter().zip(c_out).collect(),
                }
            }
        };
        let spec = ExperimentSpec {
            source,
            p_values: p_range(
                self.p_start.unwrap_or(0.01),
                self.p_end.unwrap_or(0.1),
                self.p_step.unwrap_or(0.01),
            )?,
            decoders: self.decoders.clone().unwrap_or_else(|| DecoderKind::ALL.to_vec()),
            trials: self.trials.unwrap_or(20),
            base_seed: self.seed.unwrap_or(0),
            bit_flip: BitFlipConfig::default(),
            bp: BpConfig::default(),
            max_sweeps: 1000,
            timing: self.timing.unwrap_or(false),
        };
        spec.validate()?;
        Ok(spec)
    }
}
