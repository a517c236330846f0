//! The cycle space of a graph as a parity-check code.
//!
//! A BFS spanning tree splits the edges into `n - 1` tree edges and
//! `m - n + 1` non-tree edges. Each non-tree edge closes exactly one cycle
//! with the tree; stacking those cycle indicators gives the fundamental
//! cycle matrix `H`. A sign vector `w` has zero syndrome `H · wᵀ` exactly
//! when every cycle carries an even number of negative edges.
//!
//! The node-edge incidence matrix `G` generates the same code from the
//! other side: `w = x · G` assigns edge `(u, v)` the bit `x_u ⊕ x_v`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::graph::{SignedGraph, WeightVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// `(parent, connecting edge)` for every node except the root.
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    /// Membership mask over edge indices.
    pub tree_edges: Vec<bool>,
    /// Edges not in the tree, ascending.
    pub non_tree_edges: Vec<usize>,
}

impl SpanningTree {
    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree_edges[e]
    }

    pub fn tree_edge_list(&self) -> Vec<usize> {
        (0..self.tree_edges.len()).filter(|&e| self.tree_edges[e]).collect()
    }

    /// Edges on the unique tree path between `a` and `b`.
    pub fn path_edges(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut edges = Vec::new();
        while self.depth[a] > self.depth[b] {
            let (p, e) = self.parent[a].expect("non-root node has a parent");
            edges.push(e);
            a = p;
        }
        while self.depth[b] > self.depth[a] {
            let (p, e) = self.parent[b].expect("non-root node has a parent");
            edges.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = self.parent[a].expect("non-root node has a parent");
            let (pb, eb) = self.parent[b].expect("non-root node has a parent");
            edges.push(ea);
            edges.push(eb);
            a = pa;
            b = pb;
        }
        edges
    }
}

/// BFS spanning tree from `root`, visiting neighbors in ascending id order.
pub fn spanning_tree(graph: &SignedGraph, root: usize) -> Result<SpanningTree> {
    let n = graph.node_count();
    if root >= n {
        return Err(Error::NodeOutOfRange { node: root, n });
    }
    let mut parent = vec![None; n];
    let mut depth = vec![0; n];
    let mut seen = vec![false; n];
    let mut tree_edges = vec![false; graph.edge_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in graph.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, e));
                depth[v] = depth[u] + 1;
                tree_edges[e] = true;
                queue.push_back(v);
            }
        }
    }
    if let Some(unreached) = seen.iter().position(|&s| !s) {
        return Err(Error::Disconnected(unreached));
    }
    let non_tree_edges = (0..graph.edge_count()).filter(|&e| !tree_edges[e]).collect();
    Ok(SpanningTree {
        root,
        parent,
        depth,
        tree_edges,
        non_tree_edges,
    })
}

/// The `(m - n + 1) × m` fundamental cycle matrix together with the tree
/// it was built from.
#[derive(Clone, Debug)]
pub struct FundamentalCycleMatrix {
    pub h: BitMatrix,
    pub tree: SpanningTree,
}

impl FundamentalCycleMatrix {
    /// Builds `H` from a BFS tree rooted at `root`.
    pub fn from_graph(graph: &SignedGraph, root: usize) -> Result<Self> {
        let tree = spanning_tree(graph, root)?;
        Ok(fundamental_cycle_matrix(graph, tree))
    }

    pub fn num_checks(&self) -> usize {
        self.h.num_rows()
    }

    pub fn num_edges(&self) -> usize {
        self.h.num_cols()
    }
}

/// Row `i` is the cycle closed by the `i`-th non-tree edge: the edge itself
/// plus the tree path between its endpoints.
pub fn fundamental_cycle_matrix(graph: &SignedGraph, tree: SpanningTree) -> FundamentalCycleMatrix {
    let mut h = BitMatrix::new(graph.edge_count());
    for &e in &tree.non_tree_edges {
        let edge = graph.edge(e);
        let mut row = tree.path_edges(edge.u, edge.v);
        row.push(e);
        h.push_row(row).expect("edge indices are in range");
    }
    FundamentalCycleMatrix { h, tree }
}

/// The `n × m` node-edge incidence matrix.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    pub g: BitMatrix,
}

pub fn generator_matrix(graph: &SignedGraph) -> GeneratorMatrix {
    let mut rows = vec![Vec::new(); graph.node_count()];
    for (j, e) in graph.edges().iter().enumerate() {
        rows[e.u].push(j);
        rows[e.v].push(j);
    }
    GeneratorMatrix {
        g: BitMatrix::from_rows(graph.edge_count(), rows).expect("edge indices are in range"),
    }
}

/// `s = H · wᵀ`; bit `i` is set iff cycle `i` is unbalanced.
pub fn syndrome(h: &FundamentalCycleMatrix, w: &WeightVector) -> Result<BitVector> {
    h.h.mul_vec(w.bits())
}

pub fn is_codeword(h: &FundamentalCycleMatrix, w: &WeightVector) -> Result<bool> {
    Ok(syndrome(h, w)?.is_zero())
}

/// `w = x · G`: edge `(u, v)` gets `x_u ⊕ x_v`.
pub fn encode(x: &BitVector, g: &GeneratorMatrix) -> Result<WeightVector> {
    if x.len() != g.g.num_rows() {
        return Err(Error::DimensionMismatch {
            expected: g.g.num_rows(),
            actual: x.len(),
        });
    }
    let mut w = BitVector::zeros(g.g.num_cols());
    for i in x.iter_ones() {
        for &j in g.g.row(i) {
            w.flip(j);
        }
    }
    Ok(WeightVector(w))
}
