use super::{check_inputs, finish, unsatisfied_counts, DecodeResult, StopReason};
use crate::cycle_space::{syndrome, FundamentalCycleMatrix};
use crate::error::{Error, Result};
use crate::graph::{SignedGraph, WeightVector};

/// How to choose among edges that share the largest unsatisfied count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// The lowest edge index.
    LowestIndex,
    /// The edge lying on the fewest cycles overall, then the lowest index.
    /// Among tied edges this one makes the fewest satisfied checks fail.
    #[default]
    FewestChecks,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitFlipConfig {
    pub max_iterations: usize,
    /// Stop once at most this many checks are unsatisfied.
    pub delta: usize,
    pub tie_break: TieBreak,
}

impl Default for BitFlipConfig {
    fn default() -> Self {
        BitFlipConfig {
            max_iterations: 20,
            delta: 0,
            tie_break: TieBreak::default(),
        }
    }
}

impl BitFlipConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Greedy hard-decision decoding: repeatedly flip the edge that lies on the
/// most unbalanced cycles.
///
/// One flip per iteration until at most `delta` checks fail or the
/// iteration cap is reached. Choosing the edge flipped in the previous
/// iteration means the run alternates between two vectors until the cap;
/// that case is resolved at once, with the result of running to the cap,
/// and reported as [`StopReason::Oscillation`].
pub fn bit_flipping_decode(
    graph: &SignedGraph,
    h: &FundamentalCycleMatrix,
    w: &WeightVector,
    cfg: &BitFlipConfig,
) -> Result<DecodeResult> {
    cfg.validate()?;
    check_inputs(graph, h, w)?;
    let column_weight: Vec<usize> = h.h.column_lists().iter().map(Vec::len).collect();
    let mut corrected = w.clone();
    let mut last_flip = None;
    let mut iterations = 0;
    loop {
        let s = syndrome(h, &corrected)?;
        let unsatisfied = s.count_ones();
        if unsatisfied <= cfg.delta {
            return finish(graph, h, corrected, iterations, StopReason::Converged, unsatisfied);
        }
        if iterations == cfg.max_iterations {
            return finish(graph, h, corrected, iterations, StopReason::IterationCap, unsatisfied);
        }
        let u = unsatisfied_counts(h, &s)?;
        let best = select_edge(&u, &column_weight, cfg.tie_break);
        if last_flip == Some(best) {
            if (cfg.max_iterations - iterations) % 2 == 1 {
                corrected.flip(best);
            }
            let unsatisfied = syndrome(h, &corrected)?.count_ones();
            return finish(graph, h, corrected, cfg.max_iterations, StopReason::Oscillation, unsatisfied);
        }
        corrected.flip(best);
        last_flip = Some(best);
        iterations += 1;
    }
}

fn select_edge(u: &[u32], column_weight: &[usize], tie_break: TieBreak) -> usize {
    let max = u.iter().copied().max().unwrap_or(0);
    let tied = (0..u.len()).filter(|&k| u[k] == max);
    match tie_break {
        TieBreak::LowestIndex => tied.min(),
        TieBreak::FewestChecks => tied.min_by_key(|&k| (column_weight[k], k)),
    }
    .expect("at least one edge when a check is unsatisfied")
}
