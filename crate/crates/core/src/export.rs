//! Downloadable renderings of mining results: plain text, GraphML and the
//! graph-JSON document consumed by the browser UI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dag::{DagStats, KeyPointDag, PatternSegment};
use crate::error::ExportError;
use crate::miner::MlcsResult;

/// Reserved id of the virtual source node.
pub const SOURCE_ID: i64 = -1;
/// Reserved id of the virtual sink node.
pub const SINK_ID: i64 = -2;
/// Character label of the virtual nodes.
pub const VIRTUAL_CHAR: &str = "∅";

/// Header lines, then one `<MLCS>\t<gap>` line per path in result order.
pub fn export_text(result: &MlcsResult, stats: &DagStats, d: usize) -> String {
    let mut out = String::new();
    let k = result
        .requested_k
        .map_or_else(|| "all".to_string(), |k| k.to_string());
    writeln!(out, "# d={d}").unwrap();
    writeln!(out, "# L={}", stats.mlcs_len).unwrap();
    writeln!(out, "# paths={}", stats.path_count).unwrap();
    writeln!(out, "# k={k}").unwrap();
    if result.mlcs_len == 0 {
        out.push_str("<empty>\t0\n");
    }
    for p in &result.paths {
        writeln!(out, "{}\t{}", p.text, p.gap_score).unwrap();
    }
    out
}

/// Pretty JSON rendering of [`DagStats`], as written to `stats.json`.
pub fn export_stats_json(stats: &DagStats) -> String {
    let mut out = serde_json::to_string_pretty(stats).expect("stats serialize");
    out.push('\n');
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn join_coords(coords: &[u32]) -> String {
    coords
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical GraphML: source, level nodes in id order, sink; edges sorted by
/// (source, target) in that same order.
pub fn export_graphml(dag: &KeyPointDag) -> String {
    let l = dag.mlcs_len();
    let d = dag.d();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    for (name, ty) in [
        ("level", "int"),
        ("char", "string"),
        ("coords", "string"),
        ("fd", "int"),
        ("bd", "int"),
    ] {
        writeln!(
            out,
            "  <key id=\"{name}\" for=\"node\" attr.name=\"{name}\" attr.type=\"{ty}\"/>"
        )
        .unwrap();
    }
    out.push_str("  <graph id=\"DAG_KP\" edgedefault=\"directed\">\n");

    let node = |out: &mut String, id: i64, level: u32, ch: &str, coords: &str, fd: u32, bd: u32| {
        writeln!(
            out,
            "    <node id=\"{id}\"><data key=\"level\">{level}</data><data key=\"char\">{}</data><data key=\"coords\">{coords}</data><data key=\"fd\">{fd}</data><data key=\"bd\">{bd}</data></node>",
            xml_escape(ch)
        )
        .unwrap();
    };
    node(&mut out, SOURCE_ID, 0, VIRTUAL_CHAR, &join_coords(&vec![0; d]), 0, l);
    let ids = dag.global_ids();
    for (li, level) in dag.levels().iter().enumerate() {
        for (i, n) in level.nodes.iter().enumerate() {
            let ch = dag.alphabet().symbol(n.code).to_string();
            node(
                &mut out,
                (ids[li] + i as u64) as i64,
                li as u32 + 1,
                &ch,
                &join_coords(&n.coords),
                n.fd,
                n.bd,
            );
        }
    }
    let inf = vec!["inf"; d].join(",");
    node(&mut out, SINK_ID, l + 1, VIRTUAL_CHAR, &inf, l, 0);

    for edge in edge_list(dag) {
        writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"/>",
            edge.from, edge.to
        )
        .unwrap();
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: i64,
    pub to: i64,
}

fn edge_list(dag: &KeyPointDag) -> Vec<EdgeDoc> {
    let l = dag.mlcs_len();
    if l == 0 {
        return vec![EdgeDoc {
            from: SOURCE_ID,
            to: SINK_ID,
        }];
    }
    let ids = dag.global_ids();
    let mut edges = Vec::new();
    for i in 0..dag.level(1).width() {
        edges.push(EdgeDoc {
            from: SOURCE_ID,
            to: i as i64,
        });
    }
    for (li, level) in dag.levels().iter().enumerate() {
        for (i, succ) in level.succ.iter().enumerate() {
            let from = (ids[li] + i as u64) as i64;
            for &j in succ {
                edges.push(EdgeDoc {
                    from,
                    to: (ids[li + 1] + j as u64) as i64,
                });
            }
        }
    }
    let last = l as usize - 1;
    for i in 0..dag.level(l).width() {
        edges.push(EdgeDoc {
            from: (ids[last] + i as u64) as i64,
            to: SINK_ID,
        });
    }
    edges
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: i64,
    pub char: String,
    pub coords: Vec<u32>,
    pub fd: u32,
    pub bd: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub index: u32,
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopkEntry {
    pub text: String,
    pub gap: u64,
    pub embedding: Vec<Vec<u32>>,
}

impl TopkEntry {
    pub fn from_result(result: &MlcsResult) -> Vec<Self> {
        result
            .paths
            .iter()
            .map(|p| TopkEntry {
                text: p.text.clone(),
                gap: p.gap_score,
                embedding: p.embedding.iter().map(|c| c.to_vec()).collect(),
            })
            .collect()
    }
}

/// Graph document served to the UI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(rename = "L")]
    pub mlcs_len: u32,
    pub levels: Vec<LevelDoc>,
    pub edges: Vec<EdgeDoc>,
    pub patterns: Vec<PatternSegment>,
    pub stats: DagStats,
    pub topk: Vec<TopkEntry>,
}

impl GraphDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph document serializes")
    }

    /// Node ids unique, every edge endpoint present (or virtual).
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut ids = std::collections::HashSet::new();
        for level in &self.levels {
            for n in &level.nodes {
                if !ids.insert(n.id) {
                    return Err(format!("duplicate node id {}", n.id));
                }
            }
        }
        for e in &self.edges {
            for end in [e.from, e.to] {
                if end != SOURCE_ID && end != SINK_ID && !ids.contains(&end) {
                    return Err(format!("edge endpoint {end} missing"));
                }
            }
        }
        Ok(())
    }
}

/// Builds the graph document, optionally restricted to levels `from..=to`.
///
/// A restricted view keeps the edges between its own levels, plus the source
/// links when it starts at level 1 and the sink links when it ends at level L.
pub fn export_graph_json(
    dag: &KeyPointDag,
    result: &MlcsResult,
    patterns: &[PatternSegment],
    stats: &DagStats,
    range: Option<(u32, u32)>,
) -> Result<GraphDocument, ExportError> {
    let l = dag.mlcs_len();
    let (from, to) = match range {
        Some((from, to)) => {
            if from < 1 || from > to || to > l {
                return Err(ExportError::LevelRange {
                    from,
                    to,
                    levels: l,
                });
            }
            (from, to)
        }
        None => (1, l),
    };
    let ids = dag.global_ids();
    let mut levels = Vec::new();
    for lvl in from..=to {
        let li = lvl as usize - 1;
        let nodes = dag
            .level(lvl)
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| NodeDoc {
                id: (ids[li] + i as u64) as i64,
                char: dag.alphabet().symbol(n.code).to_string(),
                coords: n.coords.to_vec(),
                fd: n.fd,
                bd: n.bd,
            })
            .collect();
        levels.push(LevelDoc { index: lvl, nodes });
    }
    let edges = if range.is_none() {
        edge_list(dag)
    } else {
        let lo = ids[from as usize - 1] as i64;
        let hi = ids[to as usize - 1] as i64 + dag.level(to).width() as i64;
        let inside = |id: i64| (lo..hi).contains(&id);
        edge_list(dag)
            .into_iter()
            .filter(|e| {
                let from_ok = inside(e.from) || (e.from == SOURCE_ID && from == 1);
                let to_ok = inside(e.to) || (e.to == SINK_ID && to == l);
                from_ok && to_ok
            })
            .collect()
    };
    let patterns = patterns
        .iter()
        .filter(|p| p.to_level >= from && p.from_level <= to)
        .cloned()
        .collect();
    Ok(GraphDocument {
        mlcs_len: l,
        levels,
        edges,
        patterns,
        stats: stats.clone(),
        topk: TopkEntry::from_result(result),
    })
}
