//! Sum-product belief propagation in the log-likelihood-ratio domain.
//!
//! Variable nodes are the edges of the signed graph, check nodes are the
//! fundamental cycles. Messages follow a flooding schedule: every iteration
//! updates all check-to-variable messages, then all variable-to-check
//! messages and the per-variable totals, then takes a hard decision and
//! tests the syndrome.

use super::{check_inputs, finish, DecodeResult, StopReason};
use crate::cycle_space::{syndrome, FundamentalCycleMatrix};
use crate::error::{Error, Result};
use crate::graph::{SignedGraph, WeightVector};

/// Largest message magnitude, in nats.
pub const DEFAULT_CLAMP: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BpConfig {
    pub max_iterations: usize,
    pub clamp: f64,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            max_iterations: 100,
            clamp: DEFAULT_CLAMP,
        }
    }
}

/// Channel LLR `log p(w | 0) / p(w | 1)` of a bit observed through a binary
/// symmetric channel with crossover probability `p`.
pub fn intrinsic_llr(bit: bool, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidProbability(p));
    }
    let magnitude = ((1.0 - p) / p).ln();
    Ok(if bit { -magnitude } else { magnitude })
}

/// `2 atanh(∏ tanh(L / 2))` over the incoming variable messages, clamped.
pub fn check_to_variable(incoming: &[f64], clamp: f64) -> f64 {
    let product: f64 = incoming.iter().map(|&l| (l / 2.0).tanh()).product();
    (2.0 * product.atanh()).clamp(-clamp, clamp)
}

/// Intrinsic LLR plus the incoming check messages, clamped.
pub fn variable_to_check(incoming: &[f64], intrinsic: f64, clamp: f64) -> f64 {
    (incoming.iter().sum::<f64>() + intrinsic).clamp(-clamp, clamp)
}

/// Bipartite variable/check structure mirroring `H`.
///
/// Tanner-graph edges are numbered in row-major order of `H`, so the
/// members of check `i` occupy `check_offsets[i]..check_offsets[i + 1]`.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    pub check_offsets: Vec<usize>,
    /// Variable index of each Tanner edge.
    pub edge_variable: Vec<usize>,
    /// Tanner edges incident to each variable.
    pub variable_edges: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn new(h: &FundamentalCycleMatrix) -> Self {
        let mut check_offsets = Vec::with_capacity(h.num_checks() + 1);
        let mut edge_variable = Vec::with_capacity(h.h.nnz());
        let mut variable_edges = vec![Vec::new(); h.num_edges()];
        check_offsets.push(0);
        for row in h.h.rows() {
            for &j in row {
                variable_edges[j].push(edge_variable.len());
                edge_variable.push(j);
            }
            check_offsets.push(edge_variable.len());
        }
        TannerGraph {
            check_offsets,
            edge_variable,
            variable_edges,
        }
    }

    pub fn num_checks(&self) -> usize {
        self.check_offsets.len() - 1
    }

    pub fn num_variables(&self) -> usize {
        self.variable_edges.len()
    }

    pub fn check_edges(&self, i: usize) -> std::ops::Range<usize> {
        self.check_offsets[i]..self.check_offsets[i + 1]
    }
}

/// Message storage for one decoding run.
#[derive(Clone, Debug)]
pub struct LlrState {
    pub intrinsic: Vec<f64>,
    pub var_to_check: Vec<f64>,
    pub check_to_var: Vec<f64>,
    pub total: Vec<f64>,
    pub clamp: f64,
}

impl LlrState {
    pub fn new(tanner: &TannerGraph, w: &WeightVector, p: f64, clamp: f64) -> Result<Self> {
        let intrinsic = (0..w.len())
            .map(|j| Ok(intrinsic_llr(w.get(j), p)?.clamp(-clamp, clamp)))
            .collect::<Result<Vec<_>>>()?;
        let var_to_check = tanner.edge_variable.iter().map(|&j| intrinsic[j]).collect();
        Ok(LlrState {
            total: intrinsic.clone(),
            intrinsic,
            var_to_check,
            check_to_var: vec![0.0; tanner.edge_variable.len()],
            clamp,
        })
    }

    /// Check-node half iteration. Leave-one-out products come from prefix
    /// and suffix products so no division by a vanishing tanh is needed.
    pub fn update_checks(&mut self, tanner: &TannerGraph) {
        let mut prefix = Vec::new();
        for i in 0..tanner.num_checks() {
            let range = tanner.check_edges(i);
            let t: Vec<f64> = self.var_to_check[range.clone()]
                .iter()
                .map(|&l| (l / 2.0).tanh())
                .collect();
            prefix.clear();
            prefix.push(1.0);
            for &x in &t {
                prefix.push(prefix.last().unwrap() * x);
            }
            let mut suffix = 1.0;
            for (k, e) in range.enumerate().rev() {
                let product = prefix[k] * suffix;
                self.check_to_var[e] = (2.0 * product.atanh()).clamp(-self.clamp, self.clamp);
                suffix *= t[k];
            }
        }
    }

    /// Variable-node half iteration; also refreshes the totals.
    pub fn update_variables(&mut self, tanner: &TannerGraph) {
        for (j, edges) in tanner.variable_edges.iter().enumerate() {
            let total = self.intrinsic[j] + edges.iter().map(|&e| self.check_to_var[e]).sum::<f64>();
            self.total[j] = total;
            for &e in edges {
                self.var_to_check[e] = (total - self.check_to_var[e]).clamp(-self.clamp, self.clamp);
            }
        }
    }

    /// Bit `j` is 1 iff its total LLR is negative.
    pub fn hard_decision(&self) -> WeightVector {
        self.total.iter().map(|&l| l < 0.0).collect()
    }
}

/// Decodes `w`, observed through a binary symmetric channel with crossover
/// probability `p`, by flooding-schedule sum-product.
///
/// Converges at the first iteration whose hard decision has zero syndrome;
/// otherwise returns the last hard decision after `max_iterations`.
pub fn bp_decode(
    graph: &SignedGraph,
    h: &FundamentalCycleMatrix,
    w: &WeightVector,
    p: f64,
    cfg: &BpConfig,
) -> Result<DecodeResult> {
    if cfg.max_iterations == 0 {
        return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
    }
    if !(cfg.clamp > 0.0 && cfg.clamp.is_finite()) {
        return Err(Error::InvalidParameter(format!("clamp {} must be positive", cfg.clamp)));
    }
    check_inputs(graph, h, w)?;
    let tanner = TannerGraph::new(h);
    let mut state = LlrState::new(&tanner, w, p, cfg.clamp)?;
    let mut decision = w.clone();
    for iteration in 1..=cfg.max_iterations {
        state.update_checks(&tanner);
        state.update_variables(&tanner);
        decision = state.hard_decision();
        let unsatisfied = syndrome(h, &decision)?.count_ones();
        if unsatisfied == 0 {
            return finish(graph, h, decision, iteration, StopReason::Converged, 0);
        }
    }
    let unsatisfied = syndrome(h, &decision)?.count_ones();
    finish(graph, h, decision, cfg.max_iterations, StopReason::IterationCap, unsatisfied)
}
