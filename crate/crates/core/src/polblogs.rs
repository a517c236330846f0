//! Ingestion of a GML citation network with a binary per-node orientation
//! attribute (the political blogs network), turned into a signed graph:
//! links between nodes of the same orientation become positive edges,
//! links across orientations negative ones.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::datagen::{largest_component, GroundTruth};
use crate::error::{Error, Result};
use crate::graph::{partition_codeword, Partition, Side, Sign, SignedGraph};

/// A parsed GML value. Lists keep their key order and repeated keys.
#[derive(Clone, Debug, PartialEq)]
pub enum GmlValue {
    Int(i64),
    Float(f64),
    Str(String),
    List(Vec<(String, GmlValue)>),
}

impl GmlValue {
    pub fn as_int(&self) -> Option<i64> {
        match *self {
            GmlValue::Int(i) => Some(i),
            GmlValue::Float(f) if f.fract() == 0.0 => Some(f as i64),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[(String, GmlValue)]> {
        match self {
            GmlValue::List(l) => Some(l),
            _ => None,
        }
    }

    /// First value under `key` in a list.
    pub fn get(&self, key: &str) -> Option<&GmlValue> {
        self.as_list()?.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a GmlValue> + 'a {
        self.as_list()
            .unwrap_or(&[])
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v)
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Key(String),
    Num(String),
    Str(String),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '[' => {
                chars.next();
                tokens.push((line, Token::Open));
            }
            ']' => {
                chars.next();
                tokens.push((line, Token::Close));
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            s.push(ch);
                        }
                        None => return Err(Error::parse(start, "unterminated string")),
                    }
                }
                tokens.push((start, Token::Str(s)));
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '[' || ch == ']' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                let first = s.chars().next().expect("non-empty token");
                if first.is_ascii_digit() || first == '-' || first == '+' || first == '.' {
                    tokens.push((line, Token::Num(s)));
                } else {
                    tokens.push((line, Token::Key(s)));
                }
            }
        }
    }
    Ok(tokens)
}

/// Parses GML text into its top-level key/value list.
pub fn parse_gml(text: &str) -> Result<GmlValue> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let list = parse_list(&tokens, &mut pos, false)?;
    Ok(GmlValue::List(list))
}

fn parse_list(tokens: &[(usize, Token)], pos: &mut usize, nested: bool) -> Result<Vec<(String, GmlValue)>> {
    let mut out = Vec::new();
    loop {
        let Some((line, tok)) = tokens.get(*pos) else {
            if nested {
                let line = tokens.last().map_or(0, |t| t.0);
                return Err(Error::parse(line, "missing `]`"));
            }
            return Ok(out);
        };
        *pos += 1;
        let key = match tok {
            Token::Close if nested => return Ok(out),
            Token::Key(k) => k.clone(),
            other => return Err(Error::parse(*line, format!("expected a key, found {other:?}"))),
        };
        let Some((vline, vtok)) = tokens.get(*pos) else {
            return Err(Error::parse(*line, format!("key {key:?} has no value")));
        };
        *pos += 1;
        let value = match vtok {
            Token::Open => GmlValue::List(parse_list(tokens, pos, true)?),
            Token::Str(s) => GmlValue::Str(s.clone()),
            Token::Num(s) => {
                if let Ok(i) = s.parse::<i64>() {
                    GmlValue::Int(i)
                } else {
                    GmlValue::Float(
                        s.parse()
                            .map_err(|_| Error::parse(*vline, format!("bad number {s:?}")))?,
                    )
                }
            }
            other => return Err(Error::parse(*vline, format!("unexpected {other:?}"))),
        };
        out.push((key, value));
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetStats {
    pub nodes: usize,
    /// Undirected edges after collapsing reciprocal and repeated links.
    pub edges: usize,
    /// Links in the file between retained nodes, excluding self links,
    /// counted with multiplicity and direction.
    pub links: usize,
    /// Nodes per orientation: attribute 0, attribute 1.
    pub community_sizes: (usize, usize),
}

impl DatasetStats {
    /// `2 · edges / nodes`.
    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges as f64 / self.nodes as f64
    }

    /// `2 · links / nodes`, the degree before collapsing directed links.
    pub fn mean_link_degree(&self) -> f64 {
        2.0 * self.links as f64 / self.nodes as f64
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: SignedGraph,
    pub truth: GroundTruth,
    pub stats: DatasetStats,
}

/// Builds the signed network from GML text. `attribute` names the node key
/// holding the orientation, with values 0 and 1. Self and duplicate links
/// are dropped, directions ignored, and only the largest connected
/// component kept.
pub fn signed_network_from_gml(text: &str, attribute: &str) -> Result<Dataset> {
    let root = parse_gml(text)?;
    let graph_list = root
        .get("graph")
        .ok_or_else(|| Error::parse(0, "no `graph` section"))?;
    let mut orientation: HashMap<u64, Side> = HashMap::new();
    for node in graph_list.get_all("node") {
        let id = node
            .get("id")
            .and_then(GmlValue::as_int)
            .and_then(|i| u64::try_from(i).ok())
            .ok_or_else(|| Error::parse(0, "node without a non-negative integer id"))?;
        let value = node
            .get(attribute)
            .ok_or(Error::MissingAttribute(id))?
            .as_int();
        let side = match value {
            Some(0) => Side::First,
            Some(1) => Side::Second,
            _ => {
                return Err(Error::parse(
                    0,
                    format!("node {id}: {attribute} must be 0 or 1"),
                ))
            }
        };
        orientation.insert(id, side);
    }
    let mut links = Vec::new();
    for edge in graph_list.get_all("edge") {
        let end = |key: &str| {
            edge.get(key)
                .and_then(GmlValue::as_int)
                .and_then(|i| u64::try_from(i).ok())
                .ok_or_else(|| Error::parse(0, format!("edge without integer {key}")))
        };
        let (s, t) = (end("source")?, end("target")?);
        for id in [s, t] {
            if !orientation.contains_key(&id) {
                return Err(Error::parse(0, format!("edge refers to unknown node {id}")));
            }
        }
        if s != t {
            links.push((s, t));
        }
    }
    let pairs: BTreeSet<(u64, u64)> = links.iter().map(|&(s, t)| (s.min(t), s.max(t))).collect();
    let full = SignedGraph::from_edges(pairs.iter().map(|&(u, v)| {
        let sign = if orientation[&u] == orientation[&v] {
            Sign::Positive
        } else {
            Sign::Negative
        };
        (u, v, sign)
    }))?;
    let partition = Partition::new(full.external_ids().iter().map(|id| orientation[id]).collect());
    let truth = GroundTruth {
        clean_weights: partition_codeword(&full, &partition)?,
        partition,
    };
    let (graph, _, truth) = largest_component(&full, &full.weights(), &truth)?;
    let kept: std::collections::HashSet<u64> = graph.external_ids().iter().copied().collect();
    let stats = DatasetStats {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        links: links
            .iter()
            .filter(|(s, t)| kept.contains(s) && kept.contains(t))
            .count(),
        community_sizes: (truth.partition.size(Side::First), truth.partition.size(Side::Second)),
    };
    Ok(Dataset { graph, truth, stats })
}

/// Loads the political blogs GML file (orientation key `value`).
pub fn load_polblogs(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    signed_network_from_gml(&text, "value")
}
