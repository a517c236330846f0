//! Community detection by minimizing the Hamming distance between the
//! observed sign vector and the codeword of a two-way partition.
//!
//! The distance decomposes over node pairs, so moving one node `v` from
//! `S_from` to `S_to` changes it by exactly `q(v, S_from) - q(v, S_to)`,
//! where `q(v, S)` counts positive minus negative edges from `v` into `S`.
//! The local search moves a node only when that change is negative, so the
//! distance strictly decreases and the search terminates.
//!
//! The same search can be driven by any symmetric, zero-diagonal affinity
//! matrix; [`two_step_matrix`] supplies `A + A²/2`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{partition_codeword, Partition, Side, SignedGraph, WeightVector};

/// Symmetric node affinity matrix with zero diagonal, stored as sorted
/// sparse rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl CorrelationMatrix {
    /// `+1` for a positive edge, `-1` for a negative edge, `0` otherwise.
    pub fn plain(graph: &SignedGraph, weights: &WeightVector) -> Result<Self> {
        if weights.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                actual: weights.len(),
            });
        }
        let rows = (0..graph.node_count())
            .map(|u| {
                graph
                    .neighbors(u)
                    .iter()
                    .map(|&(v, e)| (v, if weights.get(e) { -1.0 } else { 1.0 }))
                    .collect()
            })
            .collect();
        Ok(CorrelationMatrix { rows })
    }

    /// Builds from dense rows; the diagonal is ignored.
    pub fn from_dense(dense: &[Vec<f64>]) -> Result<Self> {
        let n = dense.len();
        let mut rows = Vec::with_capacity(n);
        for (u, r) in dense.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: r.len(),
                });
            }
            rows.push(
                r.iter()
                    .enumerate()
                    .filter(|&(v, &x)| v != u && x != 0.0)
                    .map(|(v, &x)| (v, x))
                    .collect(),
            );
        }
        let m = CorrelationMatrix { rows };
        if !m.is_symmetric() {
            return Err(Error::InvalidParameter("correlation matrix must be symmetric".into()));
        }
        Ok(m)
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    /// Nonzero off-diagonal entries of row `u`, ascending by column.
    pub fn row(&self, u: usize) -> &[(usize, f64)] {
        &self.rows[u]
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        match self.rows[u].binary_search_by_key(&v, |&(c, _)| c) {
            Ok(k) => self.rows[u][k].1,
            Err(_) => 0.0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(u, row)| row.iter().all(|&(v, x)| self.get(v, u) == x))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.node_count();
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0.0; n];
                for &(v, x) in row {
                    d[v] = x;
                }
                d
            })
            .collect()
    }
}

/// `A + ½A²` with the diagonal zeroed. Entries that cancel to zero are
/// dropped.
pub fn two_step_matrix(a: &CorrelationMatrix) -> CorrelationMatrix {
    let n = a.node_count();
    let mut acc = vec![0.0f64; n];
    let mut touched = vec![false; n];
    let mut cols = Vec::new();
    let mut rows = Vec::with_capacity(n);
    for u in 0..n {
        for &(k, a_uk) in a.row(u) {
            for &(v, a_kv) in a.row(k) {
                if !touched[v] {
                    touched[v] = true;
                    cols.push(v);
                }
                acc[v] += 0.5 * a_uk * a_kv;
            }
            if !touched[k] {
                touched[k] = true;
                cols.push(k);
            }
            acc[k] += a_uk;
        }
        cols.sort_unstable();
        let row: Vec<(usize, f64)> = cols
            .iter()
            .filter(|&&v| v != u && acc[v] != 0.0)
            .map(|&v| (v, acc[v]))
            .collect();
        for &v in &cols {
            acc[v] = 0.0;
            touched[v] = false;
        }
        cols.clear();
        rows.push(row);
    }
    CorrelationMatrix { rows }
}

/// Counting form of the distance: half the sum of negative edges inside sets and
/// positive edges across sets, counted over ordered node pairs.
pub fn hamming_distance(graph: &SignedGraph, weights: &WeightVector, partition: &Partition) -> Result<usize> {
    if weights.len() != graph.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.edge_count(),
            actual: weights.len(),
        });
    }
    if partition.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            actual: partition.len(),
        });
    }
    // [negative within, positive across] over ordered pairs.
    let mut neg_within = 0usize;
    let mut pos_across = 0usize;
    for u in 0..graph.node_count() {
        for &(v, e) in graph.neighbors(u) {
            let same = partition.side(u) == partition.side(v);
            let negative = weights.get(e);
            if same && negative {
                neg_within += 1;
            } else if !same && !negative {
                pos_across += 1;
            }
        }
    }
    Ok((neg_within + pos_across) / 2)
}

/// `q(v, S) = Σ_{u ∈ S, u ≠ v} M(v, u)`.
pub fn correlation(m: &CorrelationMatrix, v: usize, set: &[usize]) -> f64 {
    set.iter().filter(|&&u| u != v).map(|&u| m.get(v, u)).sum()
}

/// `q(v, S)` for `S` one side of `partition`.
pub fn side_correlation(m: &CorrelationMatrix, v: usize, partition: &Partition, side: Side) -> f64 {
    m.row(v)
        .iter()
        .filter(|&&(u, _)| partition.side(u) == side)
        .map(|&(_, x)| x)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchInit {
    /// A uniformly random split into halves of sizes `⌊n/2⌋` and `⌈n/2⌉`.
    RandomBalanced { seed: u64 },
    Given(Partition),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub init: SearchInit,
    pub max_sweeps: usize,
    /// Keep every accepted move in the outcome.
    pub record_moves: bool,
}

impl SearchConfig {
    pub fn seeded(seed: u64) -> Self {
        SearchConfig {
            init: SearchInit::RandomBalanced { seed },
            max_sweeps: 1000,
            record_moves: false,
        }
    }

    pub fn from_partition(partition: Partition) -> Self {
        SearchConfig {
            init: SearchInit::Given(partition),
            max_sweeps: 1000,
            record_moves: false,
        }
    }

    pub fn recording(mut self) -> Self {
        self.record_moves = true;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Move {
    pub node: usize,
    pub from: Side,
    /// Correlation with the set the node left.
    pub q_from: f64,
    /// Correlation with the set the node joined.
    pub q_to: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub initial: Partition,
    pub partition: Partition,
    pub sweeps: usize,
    pub move_count: usize,
    pub moves: Vec<Move>,
}

pub fn random_balanced_partition(n: usize, seed: u64) -> Partition {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut p = Partition::uniform(n, Side::Second);
    for &u in &order[..n / 2] {
        p.set(u, Side::First);
    }
    p
}

/// Sweeps the nodes in ascending order, moving each to the other set when
/// its correlation there is strictly larger. Moves apply immediately. Stops
/// after the first sweep without a move.
pub fn local_search(m: &CorrelationMatrix, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let n = m.node_count();
    let mut partition = match &cfg.init {
        SearchInit::RandomBalanced { seed } => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "local search needs at least 2 nodes, got {n}"
                )));
            }
            random_balanced_partition(n, *seed)
        }
        SearchInit::Given(p) => {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: p.len(),
                });
            }
            if p.size(Side::First) == 0 || p.size(Side::Second) == 0 {
                return Err(Error::InvalidParameter("initial sets must be nonempty".into()));
            }
            p.clone()
        }
    };
    let initial = partition.clone();
    let mut moves = Vec::new();
    let mut move_count = 0;
    for sweep in 1..=cfg.max_sweeps {
        let mut changed = false;
        for v in 0..n {
            let current = partition.side(v);
            let mut q_current = 0.0;
            let mut q_other = 0.0;
            for &(u, x) in m.row(v) {
                if partition.side(u) == current {
                    q_current += x;
                } else {
                    q_other += x;
                }
            }
            if q_other > q_current {
                partition.set(v, current.other());
                changed = true;
                move_count += 1;
                if cfg.record_moves {
                    moves.push(Move {
                        node: v,
                        from: current,
                        q_from: q_current,
                        q_to: q_other,
                    });
                }
            }
        }
        if !changed {
            return Ok(SearchOutcome {
                initial,
                partition,
                sweeps: sweep,
                move_count,
                moves,
            });
        }
    }
    Err(Error::SearchDidNotTerminate(cfg.max_sweeps))
}

/// Which affinity drives the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Affinity {
    Plain,
    TwoStep,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HammingResult {
    pub partition: Partition,
    /// Distance between the observed signs and the partition's codeword.
    pub distance: usize,
    pub codeword: WeightVector,
    pub sweeps: usize,
    pub move_count: usize,
}

/// Runs the local search on the observed signs `w`. The reported distance
/// is always the plain Hamming distance, whichever affinity drove the moves.
pub fn hamming_decode(
    graph: &SignedGraph,
    w: &WeightVector,
    affinity: Affinity,
    cfg: &SearchConfig,
) -> Result<HammingResult> {
    let plain = CorrelationMatrix::plain(graph, w)?;
    let m = match affinity {
        Affinity::Plain => plain,
        Affinity::TwoStep => two_step_matrix(&plain),
    };
    let outcome = local_search(&m, cfg)?;
    let codeword = partition_codeword(graph, &outcome.partition)?;
    Ok(HammingResult {
        distance: codeword.hamming(w)?,
        codeword,
        partition: outcome.partition,
        sweeps: outcome.sweeps,
        move_count: outcome.move_count,
    })
}

/// Largest graph the exhaustive search accepts.
pub const EXHAUSTIVE_MAX_NODES: usize = 24;

/// Minimum distance over all `2^(n-1)` partitions (node 0 pinned to the
/// first set), with the first minimizer found in mask order.
pub fn exhaustive_minimum(graph: &SignedGraph, w: &WeightVector) -> Result<(usize, Partition)> {
    let n = graph.node_count();
    if n > EXHAUSTIVE_MAX_NODES {
        return Err(Error::InvalidParameter(format!(
            "exhaustive search limited to {EXHAUSTIVE_MAX_NODES} nodes, got {n}"
        )));
    }
    if w.len() != graph.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.edge_count(),
            actual: w.len(),
        });
    }
    let edges: Vec<(usize, usize, bool)> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(j, e)| (e.u, e.v, w.get(j)))
        .collect();
    let free = n.saturating_sub(1);
    let mut best = (usize::MAX, 0u64);
    for mask in 0..(1u64 << free) {
        // Node 0 is bit-free; node i > 0 sits on bit i - 1.
        let side = |u: usize| u > 0 && (mask >> (u - 1)) & 1 == 1;
        let d = edges
            .iter()
            .filter(|&&(u, v, neg)| (side(u) != side(v)) != neg)
            .count();
        if d < best.0 {
            best = (d, mask);
        }
    }
    let mask = best.1;
    let labels = (0..n)
        .map(|u| {
            if u > 0 && (mask >> (u - 1)) & 1 == 1 {
                Side::Second
            } else {
                Side::First
            }
        })
        .collect();
    Ok((best.0.min(graph.edge_count()), Partition::new(labels)))
}
