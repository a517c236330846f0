//! Decoders that correct a sign vector towards a codeword of the cycle code
//! and then split the nodes by coloring the corrected network.

mod bitflip;
mod bp;

pub use bitflip::{bit_flipping_decode, BitFlipConfig, TieBreak};
pub use bp::{
    bp_decode, check_to_variable, intrinsic_llr, variable_to_check, BpConfig, LlrState,
    TannerGraph, DEFAULT_CLAMP,
};

use crate::cycle_space::FundamentalCycleMatrix;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::graph::{node_coloring, Partition, SignedGraph, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The stopping rule on unsatisfied checks was met.
    Converged,
    IterationCap,
    /// Bit flipping picked the edge it had just flipped.
    Oscillation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub corrected: WeightVector,
    pub partition: Partition,
    pub converged: bool,
    pub iterations: usize,
    /// Nonzero syndrome bits of `corrected`.
    pub residual_unsatisfied: usize,
    /// Tree-coloring conflicts of `corrected`; zero iff it is a codeword.
    pub coloring_violations: usize,
    pub stop: StopReason,
}

/// `u_k`: the number of unsatisfied checks that contain edge `k`.
pub fn unsatisfied_counts(h: &FundamentalCycleMatrix, s: &BitVector) -> Result<Vec<u32>> {
    if s.len() != h.num_checks() {
        return Err(Error::DimensionMismatch {
            expected: h.num_checks(),
            actual: s.len(),
        });
    }
    let mut u = vec![0u32; h.num_edges()];
    for i in s.iter_ones() {
        for &k in h.h.row(i) {
            u[k] += 1;
        }
    }
    Ok(u)
}

fn check_inputs(graph: &SignedGraph, h: &FundamentalCycleMatrix, w: &WeightVector) -> Result<()> {
    for expected in [graph.edge_count(), h.num_edges()] {
        if w.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: w.len(),
            });
        }
    }
    Ok(())
}

fn finish(
    graph: &SignedGraph,
    h: &FundamentalCycleMatrix,
    corrected: WeightVector,
    iterations: usize,
    stop: StopReason,
    residual_unsatisfied: usize,
) -> Result<DecodeResult> {
    let coloring = node_coloring(graph, &corrected, h.tree.root)?;
    Ok(DecodeResult {
        corrected,
        partition: coloring.partition,
        converged: stop == StopReason::Converged,
        iterations,
        residual_unsatisfied,
        coloring_violations: coloring.violations,
        stop,
    })
}
