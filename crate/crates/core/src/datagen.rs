//! Synthetic benchmark instances: a two-block signed stochastic block model
//! and binary-symmetric-channel corruption of its signs.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{partition_codeword, Partition, Side, Sign, SignedGraph, WeightVector};

/// Two equal blocks of `n / 2` nodes. Within-block pairs get a positive edge
/// with probability `c_in / n`, cross pairs a negative edge with
/// probability `c_out / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SbmParams {
    pub n: usize,
    pub c_in: f64,
    pub c_out: f64,
    pub seed: u64,
}

impl SbmParams {
    /// Parameters for average degree `c` and gap `c_in - c_out`.
    pub fn from_degree(n: usize, c: f64, gap: f64, seed: u64) -> Self {
        SbmParams {
            n,
            c_in: c + gap / 2.0,
            c_out: c - gap / 2.0,
            seed,
        }
    }

    pub fn p_in(&self) -> f64 {
        self.c_in / self.n as f64
    }

    pub fn p_out(&self) -> f64 {
        self.c_out / self.n as f64
    }

    /// `(c_in + c_out) / 2`.
    pub fn average_degree(&self) -> f64 {
        (self.c_in + self.c_out) / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "SBM node count must be even and at least 2, got {}",
                self.n
            )));
        }
        for (name, p) in [("p_in", self.p_in()), ("p_out", self.p_out())] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Block membership and the noise-free signs of a generated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub partition: Partition,
    pub clean_weights: WeightVector,
}

/// Index of the unordered pair `u < v` in row-major upper-triangle order.
fn pair_index(n: usize, u: usize, v: usize) -> u64 {
    (u * n - u * (u + 1) / 2 + (v - u - 1)) as u64
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw for pair `k`: the `k`-th 64-bit word of the ChaCha8 stream
/// seeded with `seed`, mapped to `[0, 1)` from its top 53 bits.
pub fn pair_uniform(seed: u64, k: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * k as u128);
    unit_interval(rng.next_u64())
}

/// Generates a structurally balanced signed SBM instance. Nodes
/// `0..n/2` form the first block. Nodes left without edges are dropped and
/// the rest renumbered in order; the external id of a node is its id
/// before the drop.
pub fn sbm_signed(params: &SbmParams) -> Result<(SignedGraph, GroundTruth)> {
    params.validate()?;
    let n = params.n;
    let half = n / 2;
    let (p_in, p_out) = (params.p_in(), params.p_out());
    // Sequential reads of one stream reproduce `pair_uniform` exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            debug_assert_eq!(rng.get_word_pos(), 2 * pair_index(n, u, v) as u128);
            let x = unit_interval(rng.next_u64());
            let same = (u < half) == (v < half);
            if same && x < p_in {
                edges.push((u, v, Sign::Positive));
            } else if !same && x < p_out {
                edges.push((u, v, Sign::Negative));
            }
        }
    }
    let full = SignedGraph::with_nodes(n, edges)?;
    let keep: Vec<usize> = (0..n).filter(|&u| full.degree(u) > 0).collect();
    let (graph, _) = full.induced_subgraph(&keep)?;
    let partition = Partition::new(
        keep.iter()
            .map(|&u| if u < half { Side::First } else { Side::Second })
            .collect(),
    );
    let clean_weights = partition_codeword(&graph, &partition)?;
    Ok((graph, GroundTruth { partition, clean_weights }))
}

/// Flips each bit independently with probability `p`.
pub fn bsc_flip(w: &WeightVector, p: f64, seed: u64) -> Result<WeightVector> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = w.clone();
    for j in 0..w.len() {
        if rng.gen_bool(p) {
            out.flip(j);
        }
    }
    Ok(out)
}

/// Restricts an instance to its largest connected component (ties go to
/// the component holding the smallest node id).
pub fn largest_component(
    graph: &SignedGraph,
    weights: &WeightVector,
    truth: &GroundTruth,
) -> Result<(SignedGraph, WeightVector, GroundTruth)> {
    let m = graph.edge_count();
    for len in [weights.len(), truth.clean_weights.len()] {
        if len != m {
            return Err(Error::DimensionMismatch { expected: m, actual: len });
        }
    }
    if truth.partition.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            actual: truth.partition.len(),
        });
    }
    let components = graph.components();
    let Some(best) = components
        .iter()
        .enumerate()
        .max_by_key(|&(i, c)| (c.len(), std::cmp::Reverse(i)))
        .map(|(_, c)| c)
    else {
        return Ok((graph.clone(), weights.clone(), truth.clone()));
    };
    let (sub, edge_map) = graph.induced_subgraph(best)?;
    let restrict = |w: &WeightVector| edge_map.iter().map(|&j| w.get(j)).collect::<WeightVector>();
    let partition = Partition::new(best.iter().map(|&u| truth.partition.side(u)).collect());
    Ok((
        sub,
        restrict(weights),
        GroundTruth {
            partition,
            clean_weights: restrict(&truth.clean_weights),
        },
    ))
}
