//! Two-community detection in signed networks, read as decoding of a binary
//! linear code.
//!
//! A two-way split of the nodes of a connected signed graph induces an edge
//! sign vector (an edge is negative exactly when it crosses the split). Those
//! vectors form the cut space of the graph over GF(2); its parity checks are
//! the fundamental cycles of a spanning tree. Observed signs are treated as a
//! noisy codeword and corrected with bit flipping or belief propagation, or
//! the split is found directly by minimizing Hamming distance with a local
//! search.
//!
//! ```
//! use signed_ecc::{
//!     bit_flipping_decode, BitFlipConfig, FundamentalCycleMatrix, Sign, SignedGraph,
//! };
//!
//! let g = SignedGraph::from_edges([
//!     (0, 1, Sign::Positive),
//!     (1, 2, Sign::Negative),
//!     (0, 2, Sign::Negative),
//!     (2, 3, Sign::Positive),
//! ])
//! .unwrap();
//! let h = FundamentalCycleMatrix::from_graph(&g, 0).unwrap();
//! let r = bit_flipping_decode(&g, &h, &g.weights(), &BitFlipConfig::default()).unwrap();
//! assert!(r.converged);
//! let labels: Vec<u8> = r.partition.labels().iter().map(|s| s.label()).collect();
//! assert_eq!(labels, [1, 1, 2, 2]);
//! ```

pub mod cycle_space;
pub mod datagen;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod hamming;
pub mod harness;
pub mod io;
pub mod polblogs;

pub use cycle_space::{
    encode, fundamental_cycle_matrix, generator_matrix, is_codeword, spanning_tree, syndrome,
    FundamentalCycleMatrix, GeneratorMatrix, SpanningTree,
};
pub use datagen::{bsc_flip, largest_component, sbm_signed, GroundTruth, SbmParams};
pub use decode::{
    bit_flipping_decode, bp_decode, unsatisfied_counts, BitFlipConfig, BpConfig, DecodeResult,
    StopReason, TieBreak,
};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use graph::{
    edge_accuracy, is_structurally_balanced, node_coloring, partition_codeword, ColoringResult,
    Edge, Partition, Side, Sign, SignedGraph, WeightVector,
};
pub use hamming::{
    exhaustive_minimum, hamming_decode, hamming_distance, local_search, two_step_matrix, Affinity,
    CorrelationMatrix, HammingResult, SearchConfig, SearchInit, SearchOutcome,
};
pub use harness::{run_experiment, summarize, DecoderKind, ExperimentSpec, GraphSource, TrialRecord};
pub use polblogs::{load_polblogs, Dataset, DatasetStats};
