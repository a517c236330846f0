//! Signed graphs, weight vectors, two-way partitions and node coloring.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Sign of an edge: friend (+1) or enemy (-1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    /// Weight-vector bit: 0 for positive, 1 for negative.
    pub fn bit(self) -> bool {
        self == Sign::Negative
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: Sign,
}

/// An undirected signed graph with dense, stable edge indices.
///
/// Nodes are `0..n`; the external id of every node is kept in a side table.
/// Edges are stored with `u < v`. Unless built with an explicit ordering,
/// edge `j` is the `j`-th pair in lexicographic `(u, v)` order.
#[derive(Clone, Debug)]
pub struct SignedGraph {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_index: HashMap<(usize, usize), usize>,
    external_ids: Vec<u64>,
}

impl SignedGraph {
    /// Builds a graph from edges over arbitrary external node ids. Ids are
    /// mapped to `0..n` in ascending order and edges are sorted canonically.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, Sign)>,
    {
        Self::from_external(edges.into_iter().collect(), true)
    }

    /// Like [`SignedGraph::from_edges`] but keeps the edge order as given.
    /// Used to reproduce hand-numbered examples bit-exactly.
    pub fn with_edge_order<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, Sign)>,
    {
        Self::from_external(edges.into_iter().collect(), false)
    }

    /// Builds a graph on nodes `0..n` (isolated nodes allowed) with
    /// canonical edge order. External ids equal the internal ones.
    pub fn with_nodes<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        for &(u, v, _) in &edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
        }
        Self::build((0..n as u64).collect(), edges, true)
    }

    fn from_external(edges: Vec<(u64, u64, Sign)>, canonical: bool) -> Result<Self> {
        let mut ids: Vec<u64> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let lookup: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let internal = edges
            .iter()
            .map(|&(u, v, s)| (lookup[&u], lookup[&v], s))
            .collect();
        Self::build(ids, internal, canonical)
    }

    fn build(
        external_ids: Vec<u64>,
        raw: Vec<(usize, usize, Sign)>,
        canonical: bool,
    ) -> Result<Self> {
        let n = external_ids.len();
        let mut edges = Vec::with_capacity(raw.len());
        for (u, v, sign) in raw {
            if u == v {
                return Err(Error::SelfLoop(external_ids[u]));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            edges.push(Edge { u, v, sign });
        }
        if canonical {
            edges.sort_by_key(|e| (e.u, e.v));
        }
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (j, e) in edges.iter().enumerate() {
            if edge_index.insert((e.u, e.v), j).is_some() {
                return Err(Error::DuplicateEdge(external_ids[e.u], external_ids[e.v]));
            }
            adjacency[e.u].push((e.v, j));
            adjacency[e.v].push((e.u, j));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(SignedGraph {
            edges,
            adjacency,
            edge_index,
            external_ids,
        })
    }

    pub fn node_count(&self) -> usize {
        self.external_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, j: usize) -> Edge {
        self.edges[j]
    }

    /// `(neighbor, edge index)` pairs of `u`, in ascending neighbor order.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    pub fn external_id(&self, u: usize) -> u64 {
        self.external_ids[u]
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    /// The weight vector of the graph's own signs.
    pub fn weights(&self) -> WeightVector {
        WeightVector(self.edges.iter().map(|e| e.sign.bit()).collect())
    }

    /// Copy of this graph with signs replaced by `weights`.
    pub fn with_weights(&self, weights: &WeightVector) -> Result<SignedGraph> {
        check_weights(self, weights)?;
        let mut g = self.clone();
        for (j, e) in g.edges.iter_mut().enumerate() {
            e.sign = Sign::from_bit(weights.get(j));
        }
        Ok(g)
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                n: self.node_count(),
            })
        }
    }

    /// Connected components, each sorted ascending, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Subgraph induced by `nodes` (ascending), renumbered `0..nodes.len()`
    /// with external ids kept. Also returns, for each new edge, the index of
    /// the edge it came from.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<(SignedGraph, Vec<usize>)> {
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            self.check_node(u)?;
            if i > 0 && nodes[i - 1] >= u {
                return Err(Error::InvalidParameter("node list must be strictly ascending".into()));
            }
            new_id[u] = i;
        }
        let kept: Vec<usize> = (0..self.edge_count())
            .filter(|&j| new_id[self.edges[j].u] != usize::MAX && new_id[self.edges[j].v] != usize::MAX)
            .collect();
        let raw = kept
            .iter()
            .map(|&j| {
                let e = self.edges[j];
                (new_id[e.u], new_id[e.v], e.sign)
            })
            .collect();
        let ids = nodes.iter().map(|&u| self.external_ids[u]).collect();
        let sub = Self::build(ids, raw, true)?;
        // The renumbering is monotone, so canonical order is preserved
        // whenever the parent graph was canonical; map through the pairs to
        // stay correct for custom orders too.
        let edge_map = sub
            .edges
            .iter()
            .map(|e| {
                self.edge_between(nodes[e.u], nodes[e.v])
                    .expect("induced edge exists in the parent graph")
            })
            .collect();
        Ok((sub, edge_map))
    }
}

/// Per-edge sign bits: bit `j` is set iff edge `j` is negative.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct WeightVector(pub BitVector);

impl WeightVector {
    pub fn zeros(m: usize) -> Self {
        WeightVector(BitVector::zeros(m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, j: usize) -> bool {
        self.0.get(j)
    }

    pub fn flip(&mut self, j: usize) {
        self.0.flip(j);
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn hamming(&self, other: &WeightVector) -> Result<usize> {
        self.0.hamming(&other.0)
    }
}

impl From<BitVector> for WeightVector {
    fn from(bits: BitVector) -> Self {
        WeightVector(bits)
    }
}

impl FromIterator<bool> for WeightVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        WeightVector(iter.into_iter().collect())
    }
}

/// Membership in one of the two sets of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }

    /// 1 for the first set, 2 for the second.
    pub fn label(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }

    pub fn from_label(label: u8) -> Option<Side> {
        match label {
            1 => Some(Side::First),
            2 => Some(Side::Second),
            _ => None,
        }
    }

    fn toggled(self, flip: bool) -> Side {
        if flip {
            self.other()
        } else {
            self
        }
    }
}

/// A two-way labeling of the nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition(Vec<Side>);

impl Partition {
    pub fn new(labels: Vec<Side>) -> Self {
        Partition(labels)
    }

    pub fn uniform(n: usize, side: Side) -> Self {
        Partition(vec![side; n])
    }

    /// `{i : x_i = 0} | {i : x_i = 1}`.
    pub fn from_bits(x: &BitVector) -> Self {
        Partition(x.iter().map(|b| Side::First.toggled(b)).collect())
    }

    pub fn to_bits(&self) -> BitVector {
        self.0.iter().map(|&s| s == Side::Second).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn side(&self, u: usize) -> Side {
        self.0[u]
    }

    pub fn set(&mut self, u: usize, side: Side) {
        self.0[u] = side;
    }

    pub fn labels(&self) -> &[Side] {
        &self.0
    }

    pub fn swapped(&self) -> Partition {
        Partition(self.0.iter().map(|s| s.other()).collect())
    }

    pub fn members(&self, side: Side) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.0[u] == side).collect()
    }

    pub fn size(&self, side: Side) -> usize {
        self.0.iter().filter(|&&s| s == side).count()
    }

    /// Same grouping, possibly with the labels exchanged.
    pub fn equivalent(&self, other: &Partition) -> bool {
        self.len() == other.len() && (self == other || *self == other.swapped())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringResult {
    pub partition: Partition,
    /// Non-tree edges whose sign disagrees with the coloring of their ends.
    pub violations: usize,
    pub consistent: bool,
}

fn check_weights(graph: &SignedGraph, weights: &WeightVector) -> Result<()> {
    if weights.len() == graph.edge_count() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: graph.edge_count(),
            actual: weights.len(),
        })
    }
}

/// BFS-colors the component of `root`, writing labels for reached nodes.
/// Returns the number of non-tree edges inside the component that
/// contradict the labels.
fn color_component(
    graph: &SignedGraph,
    weights: &WeightVector,
    root: usize,
    labels: &mut [Side],
    reached: &mut [bool],
) -> usize {
    let mut tree_edge = vec![false; graph.edge_count()];
    let mut visited = Vec::new();
    labels[root] = Side::First;
    reached[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        visited.push(u);
        for &(v, e) in graph.neighbors(u) {
            if !reached[v] {
                reached[v] = true;
                labels[v] = labels[u].toggled(weights.get(e));
                tree_edge[e] = true;
                queue.push_back(v);
            }
        }
    }
    let mut violations = 0;
    for &u in &visited {
        for &(v, e) in graph.neighbors(u) {
            if u < v && !tree_edge[e] && (labels[u] != labels[v]) != weights.get(e) {
                violations += 1;
            }
        }
    }
    violations
}

/// Two-colors the component containing `root` by propagating labels along
/// BFS tree edges: a positive edge keeps the parent's label, a negative one
/// switches it. Non-tree edges are only checked. Nodes outside the root's
/// component are labeled `Side::First`.
pub fn node_coloring(
    graph: &SignedGraph,
    weights: &WeightVector,
    root: usize,
) -> Result<ColoringResult> {
    graph.check_node(root)?;
    check_weights(graph, weights)?;
    let n = graph.node_count();
    let mut labels = vec![Side::First; n];
    let mut reached = vec![false; n];
    let violations = color_component(graph, weights, root, &mut labels, &mut reached);
    Ok(ColoringResult {
        partition: Partition(labels),
        violations,
        consistent: violations == 0,
    })
}

/// True iff every cycle carries an even number of negative edges, checked
/// by coloring each connected component.
pub fn is_structurally_balanced(graph: &SignedGraph, weights: &WeightVector) -> Result<bool> {
    check_weights(graph, weights)?;
    let n = graph.node_count();
    let mut labels = vec![Side::First; n];
    let mut reached = vec![false; n];
    for root in 0..n {
        if !reached[root] && color_component(graph, weights, root, &mut labels, &mut reached) > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The weight vector that makes every within-set edge positive and every
/// cross edge negative.
pub fn partition_codeword(graph: &SignedGraph, partition: &Partition) -> Result<WeightVector> {
    if partition.len() != graph.node_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.node_count(),
            actual: partition.len(),
        });
    }
    Ok(graph
        .edges()
        .iter()
        .map(|e| partition.side(e.u) != partition.side(e.v))
        .collect())
}

/// Fraction of edges whose decoded sign matches the reference.
pub fn edge_accuracy(decoded: &WeightVector, truth: &WeightVector) -> Result<f64> {
    let wrong = decoded.hamming(truth)?;
    if truth.is_empty() {
        return Ok(1.0);
    }
    Ok(1.0 - wrong as f64 / truth.len() as f64)
}
