//! Key-point DAG: construction, labeling and structural queries.
//!
//! Construction runs in two phases. [`expand_reachable`] walks minimal
//! successors from the all-zero source and records the raw match-point graph.
//! [`label_and_filter`] computes longest-path distances in both directions and
//! keeps only the points lying on a maximum-length path, grouped into levels.

mod analysis;
mod bound;
mod expand;
mod label;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::sequence::Alphabet;

pub use analysis::{common_patterns, count_paths, PatternSegment};
pub use bound::KeyBound;
pub use expand::{expand_reachable, ExpandOptions, RawGraph, WaveProgress};
pub use label::{label_and_filter, label_into, longest_path_len, LevelSink};

/// A key point: a match point with its forward and backward distances.
///
/// `fd` counts match points from the source up to and including this one;
/// `bd` counts match points strictly after it on a longest path to the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyNode {
    pub coords: Box<[u32]>,
    pub code: u8,
    pub fd: u32,
    pub bd: u32,
}

/// One level of the DAG: nodes in lexicographic coordinate order, and for
/// each node the ascending indices of its children in the next level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Level {
    pub nodes: Vec<KeyNode>,
    pub succ: Vec<Vec<u32>>,
}

impl Level {
    pub fn width(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// Leveled DAG whose source-to-sink paths spell exactly the MLCS strings.
///
/// The virtual source and sink are implicit: the source links to every node
/// of level 1 and every node of the last level links to the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPointDag {
    alphabet: Alphabet,
    d: usize,
    levels: Vec<Level>,
}

/// Address of a node: 1-based level and index within the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub level: u32,
    pub index: u32,
}

impl KeyPointDag {
    pub fn from_levels(alphabet: Alphabet, d: usize, levels: Vec<Level>) -> Self {
        Self {
            alphabet,
            d,
            levels,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// MLCS length.
    pub fn mlcs_len(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Level by 1-based index.
    pub fn level(&self, level: u32) -> &Level {
        &self.levels[level as usize - 1]
    }

    pub fn node(&self, at: NodeRef) -> &KeyNode {
        &self.level(at.level).nodes[at.index as usize]
    }

    pub fn children(&self, at: NodeRef) -> impl Iterator<Item = NodeRef> + '_ {
        self.level(at.level).succ[at.index as usize]
            .iter()
            .map(move |&index| NodeRef {
                level: at.level + 1,
                index,
            })
    }

    pub fn level_widths(&self) -> Vec<usize> {
        self.levels.iter().map(Level::width).collect()
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Level::width).sum()
    }

    /// Edges between real nodes, excluding source and sink links.
    pub fn inner_edge_count(&self) -> usize {
        self.levels.iter().map(Level::edge_count).sum()
    }

    /// Global 0-based id of a node in level-major canonical order.
    pub fn global_ids(&self) -> Vec<u64> {
        let mut offsets = Vec::with_capacity(self.levels.len());
        let mut acc = 0u64;
        for level in &self.levels {
            offsets.push(acc);
            acc += level.width() as u64;
        }
        offsets
    }

    /// Parent lists per level, mirroring [`Level::succ`].
    pub fn predecessors(&self) -> Vec<Vec<Vec<u32>>> {
        let mut preds: Vec<Vec<Vec<u32>>> = self
            .levels
            .iter()
            .map(|l| vec![Vec::new(); l.width()])
            .collect();
        for (li, level) in self.levels.iter().enumerate().take(self.levels.len().saturating_sub(1)) {
            for (i, succ) in level.succ.iter().enumerate() {
                for &j in succ {
                    preds[li + 1][j as usize].push(i as u32);
                }
            }
        }
        preds
    }

    /// Checks the structural invariants of a key-point DAG.
    pub fn check_invariants(&self) -> Result<(), String> {
        let l = self.mlcs_len();
        let preds = self.predecessors();
        for (li, level) in self.levels.iter().enumerate() {
            let lvl = li as u32 + 1;
            if level.nodes.is_empty() {
                return Err(format!("level {lvl} is empty"));
            }
            if level.succ.len() != level.nodes.len() {
                return Err(format!("level {lvl}: successor table length mismatch"));
            }
            for w in level.nodes.windows(2) {
                if w[0].coords >= w[1].coords {
                    return Err(format!("level {lvl}: nodes not strictly lexicographic"));
                }
            }
            for (i, node) in level.nodes.iter().enumerate() {
                if node.coords.len() != self.d {
                    return Err(format!("level {lvl} node {i}: wrong dimension"));
                }
                if node.fd != lvl {
                    return Err(format!("level {lvl} node {i}: fd {} != level", node.fd));
                }
                if node.fd + node.bd != l {
                    return Err(format!("level {lvl} node {i}: fd + bd != L"));
                }
                if lvl < l && level.succ[i].is_empty() {
                    return Err(format!("level {lvl} node {i}: dead end"));
                }
                if lvl == l && !level.succ[i].is_empty() {
                    return Err(format!("last level node {i} has children"));
                }
                if lvl > 1 && preds[li][i].is_empty() {
                    return Err(format!("level {lvl} node {i}: unreachable"));
                }
                for &j in &level.succ[i] {
                    let next = &self.levels[li + 1];
                    let child = next
                        .nodes
                        .get(j as usize)
                        .ok_or_else(|| format!("level {lvl} node {i}: dangling edge"))?;
                    if node.coords.iter().zip(child.coords.iter()).any(|(a, b)| a >= b) {
                        return Err(format!("level {lvl} node {i}: edge not increasing"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Construction and shape statistics of a key-point DAG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagStats {
    /// Distinct match points expanded during construction.
    #[serde(rename = "N")]
    pub nodes_expanded: u64,
    /// Successor edges examined during construction.
    #[serde(rename = "E")]
    pub edges_examined: u64,
    pub key_points: u64,
    #[serde(rename = "L")]
    pub mlcs_len: u32,
    pub level_widths: Vec<usize>,
    #[serde(with = "biguint_string")]
    pub path_count: BigUint,
}

impl DagStats {
    pub fn new(raw: &RawGraph, dag: &KeyPointDag) -> Self {
        Self {
            nodes_expanded: raw.nodes_expanded(),
            edges_examined: raw.edges_examined(),
            key_points: dag.node_count() as u64,
            mlcs_len: dag.mlcs_len(),
            level_widths: dag.level_widths(),
            path_count: count_paths(dag),
        }
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
