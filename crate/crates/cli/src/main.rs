use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use signed_ecc::harness::{parse_decoder_list, parse_f64_list, write_csv, write_summary, Settings};
use signed_ecc::io::{read_edge_list, read_truth, write_edge_list, write_truth};
use signed_ecc::{
    bit_flipping_decode, bp_decode, bsc_flip, edge_accuracy, exhaustive_minimum, hamming_decode,
    is_structurally_balanced, load_polblogs, partition_codeword, run_experiment, sbm_signed, summarize,
    syndrome, Affinity, BitFlipConfig, BpConfig, DecoderKind, FundamentalCycleMatrix, Partition,
    SbmParams, SearchConfig, SignedGraph,
};

#[derive(Parser)]
#[command(name = "signed-ecc", version, about = "Community detection in signed networks by cycle-code decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a signed two-block SBM instance as an edge list.
    GenSbm(GenSbmArgs),
    /// Report whether a signed edge list is structurally balanced.
    BalanceCheck {
        edges: PathBuf,
    },
    /// Decode a single connected instance with one decoder.
    Decode(DecodeArgs),
    /// Run a parameter sweep and write per-trial records as CSV.
    Experiment(ExperimentArgs),
    /// Convert the political blogs GML file into an edge list and truth file.
    PolblogsPrep {
        gml: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Exhaustive minimum Hamming distance (at most 16 nodes).
    #[command(hide = true)]
    Oracle {
        edges: PathBuf,
    },
}

#[derive(Args)]
struct GenSbmArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 8.5)]
    c_in: f64,
    #[arg(long, default_value_t = 3.5)]
    c_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Corrupt the signs with this crossover probability.
    #[arg(long)]
    p: Option<f64>,
    /// Seed of the corruption; defaults to `seed + 1`.
    #[arg(long)]
    noise_seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the block labels.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    edges: PathBuf,
    #[arg(long, value_parser = parse_decoder)]
    decoder: DecoderKind,
    /// Channel crossover probability assumed by belief propagation.
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Seed of the local-search start.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Truth labels for scoring edge accuracy.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// `key=value` file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma list, paired with --c-out.
    #[arg(long)]
    c_in: Option<String>,
    #[arg(long)]
    c_out: Option<String>,
    #[arg(long)]
    p_start: Option<f64>,
    #[arg(long)]
    p_end: Option<f64>,
    #[arg(long)]
    p_step: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma list of bit-flip, bp, hamming-plain, hamming-two-step.
    #[arg(long)]
    decoders: Option<String>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-group means and 95% intervals.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Fill the runtime_ms column (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

fn parse_decoder(s: &str) -> Result<DecoderKind, String> {
    s.parse().map_err(|e: signed_ecc::Error| e.to_string())
}

enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<signed_ecc::Error>() {
            Some(signed_ecc::Error::InvalidParameter(_) | signed_ecc::Error::InvalidProbability(_)) => {
                Failure::Usage(e)
            }
            _ => Failure::Data(e),
        }
    }
}

impl From<signed_ecc::Error> for Failure {
    fn from(e: signed_ecc::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::GenSbm(a) => gen_sbm(a),
        Command::BalanceCheck { edges } => balance_check(&edges),
        Command::Decode(a) => decode(a),
        Command::Experiment(a) => experiment(a),
        Command::PolblogsPrep { gml, out, truth } => polblogs_prep(&gml, &out, truth.as_deref()),
        Command::Oracle { edges } => oracle(&edges),
    }
}

fn gen_sbm(a: GenSbmArgs) -> Result<(), Failure> {
    let params = SbmParams { n: a.n, c_in: a.c_in, c_out: a.c_out, seed: a.seed };
    let (graph, truth) = sbm_signed(&params)?;
    let graph = match a.p {
        Some(p) => {
            let noisy = bsc_flip(&truth.clean_weights, p, a.noise_seed.unwrap_or(a.seed.wrapping_add(1)))?;
            graph.with_weights(&noisy)?
        }
        None => graph,
    };
    let mut out = create(&a.out)?;
    write_edge_list(&graph, &mut out)?;
    out.flush()?;
    if let Some(path) = &a.truth {
        let mut t = create(path)?;
        write_truth(&graph, &truth.partition, &mut t)?;
        t.flush()?;
    }
    println!("nodes {} edges {}", graph.node_count(), graph.edge_count());
    Ok(())
}

fn balance_check(path: &Path) -> Result<(), Failure> {
    let graph = read_edge_list(path)?;
    let w = graph.weights();
    println!("balanced: {}", is_structurally_balanced(&graph, &w)?);
    if graph.node_count() > 0 && graph.is_connected() {
        let h = FundamentalCycleMatrix::from_graph(&graph, 0)?;
        println!("unsatisfied_cycles: {}", syndrome(&h, &w)?.count_ones());
    } else {
        println!("components: {}", graph.components().len());
    }
    Ok(())
}

fn print_partition(graph: &SignedGraph, partition: &Partition) {
    let labels: Vec<String> = (0..graph.node_count())
        .map(|u| format!("{}:{}", graph.external_id(u), partition.side(u).label()))
        .collect();
    println!("partition: {}", labels.join(" "));
}

fn decode(a: DecodeArgs) -> Result<(), Failure> {
    let graph = read_edge_list(&a.edges)?;
    let w = graph.weights();
    let partition = match a.decoder {
        DecoderKind::BitFlip | DecoderKind::Bp => {
            let h = FundamentalCycleMatrix::from_graph(&graph, 0)?;
            let r = if a.decoder == DecoderKind::BitFlip {
                let mut cfg = BitFlipConfig::default();
                if let Some(k) = a.max_iterations {
                    cfg.max_iterations = k;
                }
                bit_flipping_decode(&graph, &h, &w, &cfg)?
            } else {
                let mut cfg = BpConfig::default();
                if let Some(k) = a.max_iterations {
                    cfg.max_iterations = k;
                }
                bp_decode(&graph, &h, &w, a.p, &cfg)?
            };
            println!("converged: {}", r.converged);
            println!("stop: {:?}", r.stop);
            println!("iterations: {}", r.iterations);
            println!("residual_unsatisfied: {}", r.residual_unsatisfied);
            println!("coloring_violations: {}", r.coloring_violations);
            println!("edges_changed: {}", r.corrected.hamming(&w)?);
            r.partition
        }
        DecoderKind::HammingPlain | DecoderKind::HammingTwoStep => {
            let affinity = if a.decoder == DecoderKind::HammingPlain {
                Affinity::Plain
            } else {
                Affinity::TwoStep
            };
            let r = hamming_decode(&graph, &w, affinity, &SearchConfig::seeded(a.seed))?;
            println!("distance: {}", r.distance);
            println!("sweeps: {}", r.sweeps);
            println!("moves: {}", r.move_count);
            r.partition
        }
    };
    if let Some(path) = &a.truth {
        let truth = read_truth(&graph, path)?;
        let decoded = partition_codeword(&graph, &partition)?;
        let clean = partition_codeword(&graph, &truth)?;
        println!("edge_accuracy: {}", edge_accuracy(&decoded, &clean)?);
    }
    print_partition(&graph, &partition);
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let base = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            Settings::parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => Settings::default(),
    };
    let flags = Settings {
        n: a.n,
        c_in: a.c_in.as_deref().map(parse_f64_list).transpose()?,
        c_out: a.c_out.as_deref().map(parse_f64_list).transpose()?,
        p_start: a.p_start,
        p_end: a.p_end,
        p_step: a.p_step,
        trials: a.trials,
        seed: a.seed,
        decoders: a.decoders.as_deref().map(parse_decoder_list).transpose()?,
        dataset: a.dataset,
        out: a.out,
        timing: a.timing.then_some(true),
    };
    let settings = base.merged(flags);
    let spec = settings.to_spec()?;
    let records = run_experiment(&spec)?;
    match &settings.out {
        Some(path) => {
            let mut out = create(path)?;
            write_csv(&records, &mut out)?;
            out.flush()?;
        }
        None => write_csv(&records, io::stdout().lock())?,
    }
    if let Some(path) = &a.summary {
        let mut out = create(path)?;
        write_summary(&summarize(&records), &mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn polblogs_prep(gml: &Path, out: &Path, truth: Option<&Path>) -> Result<(), Failure> {
    let d = load_polblogs(gml)?;
    let mut w = create(out)?;
    write_edge_list(&d.graph, &mut w)?;
    w.flush()?;
    if let Some(path) = truth {
        let mut t = create(path)?;
        write_truth(&d.graph, &d.truth.partition, &mut t)?;
        t.flush()?;
    }
    let s = d.stats;
    println!("nodes: {}", s.nodes);
    println!("edges: {}", s.edges);
    println!("links: {}", s.links);
    println!("mean_degree: {:.2}", s.mean_degree());
    println!("mean_link_degree: {:.2}", s.mean_link_degree());
    println!("communities: {} {}", s.community_sizes.0, s.community_sizes.1);
    Ok(())
}

fn oracle(path: &Path) -> Result<(), Failure> {
    let graph = read_edge_list(path)?;
    if graph.node_count() > 16 {
        return Err(Failure::Usage(anyhow::anyhow!(
            "oracle enumerates at most 16 nodes, graph has {}",
            graph.node_count()
        )));
    }
    let (d, partition) = exhaustive_minimum(&graph, &graph.weights())?;
    println!("distance: {d}");
    print_partition(&graph, &partition);
    Ok(())
}
