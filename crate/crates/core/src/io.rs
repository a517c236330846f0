//! Plain-text formats.
//!
//! Edge lists hold one `u v s` triple per line with `s` one of `+1`, `-1`,
//! `1`; blank lines and lines starting with `#` are skipped. Ground-truth
//! sidecars hold one `node label` pair per line with label `1` or `2`.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Partition, Side, Sign, SignedGraph};

pub fn parse_edge_list<R: Read>(reader: R) -> Result<Vec<(u64, u64, Sign)>> {
    let mut edges = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, s] = fields[..] else {
            return Err(Error::parse(lineno, format!("expected `u v sign`, got {line:?}")));
        };
        let node = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| Error::parse(lineno, format!("bad node id {t:?}")))
        };
        let sign = match s {
            "+1" | "1" => Sign::Positive,
            "-1" => Sign::Negative,
            other => return Err(Error::parse(lineno, format!("bad sign {other:?}"))),
        };
        edges.push((node(u)?, node(v)?, sign));
    }
    Ok(edges)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<SignedGraph> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    SignedGraph::from_edges(parse_edge_list(file)?)
}

/// Writes edges in index order using external node ids.
pub fn write_edge_list<W: Write>(graph: &SignedGraph, mut out: W) -> std::io::Result<()> {
    for e in graph.edges() {
        let s = match e.sign {
            Sign::Positive => "+1",
            Sign::Negative => "-1",
        };
        writeln!(out, "{} {} {}", graph.external_id(e.u), graph.external_id(e.v), s)?;
    }
    Ok(())
}

pub fn write_truth<W: Write>(graph: &SignedGraph, partition: &Partition, mut out: W) -> std::io::Result<()> {
    for u in 0..graph.node_count() {
        writeln!(out, "{} {}", graph.external_id(u), partition.side(u).label())?;
    }
    Ok(())
}

/// Reads a sidecar against `graph`'s external ids. Every node of the graph
/// must be labeled; labels for unknown ids are ignored.
pub fn parse_truth<R: Read>(graph: &SignedGraph, reader: R) -> Result<Partition> {
    let index: HashMap<u64, usize> = graph
        .external_ids()
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let mut labels: Vec<Option<Side>> = vec![None; graph.node_count()];
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [id, label] = fields[..] else {
            return Err(Error::parse(lineno, format!("expected `node label`, got {line:?}")));
        };
        let id: u64 = id
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad node id {id:?}")))?;
        let side = label
            .parse::<u8>()
            .ok()
            .and_then(Side::from_label)
            .ok_or_else(|| Error::parse(lineno, format!("bad label {label:?}")))?;
        if let Some(&u) = index.get(&id) {
            labels[u] = Some(side);
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(u, s)| s.ok_or_else(|| Error::parse(0, format!("node {} has no label", graph.external_id(u)))))
        .collect::<Result<Vec<_>>>()
        .map(Partition::new)
}

pub fn read_truth(graph: &SignedGraph, path: impl AsRef<Path>) -> Result<Partition> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_truth(graph, file)
}
