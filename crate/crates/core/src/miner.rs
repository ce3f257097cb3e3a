//! Decoding DAG paths into MLCS strings, gap scoring, and exact or top-k
//! enumeration.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::dag::{count_paths, KeyPointDag, NodeRef};
use crate::error::MineError;

/// Default soft cap on exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 100_000;
/// Default number of results shown per job.
pub const DEFAULT_TOP_K: usize = 10;

/// One source-to-sink path decoded into its MLCS string and embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlcsPath {
    /// Node index within each level, level 1 first.
    pub nodes: Vec<u32>,
    pub text: String,
    /// One coordinate vector per MLCS character.
    pub embedding: Vec<Box<[u32]>>,
    pub gap_score: u64,
}

impl MlcsPath {
    pub fn from_nodes(dag: &KeyPointDag, nodes: Vec<u32>) -> Self {
        let mut text = String::with_capacity(nodes.len());
        let mut embedding = Vec::with_capacity(nodes.len());
        for (li, &index) in nodes.iter().enumerate() {
            let node = dag.node(NodeRef {
                level: li as u32 + 1,
                index,
            });
            text.push(dag.alphabet().symbol(node.code));
            embedding.push(node.coords.clone());
        }
        let gap_score = gap_score(&embedding);
        Self {
            nodes,
            text,
            embedding,
            gap_score,
        }
    }

    /// Canonical result order: gap, then text, then embedding.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.gap_score
            .cmp(&other.gap_score)
            .then_with(|| self.text.cmp(&other.text))
            .then_with(|| self.embedding.cmp(&other.embedding))
    }
}

/// Positions skipped between consecutive match points, summed over every
/// sequence. Leading and trailing spaces are not counted.
pub fn gap_score<P: AsRef<[u32]>>(embedding: &[P]) -> u64 {
    embedding
        .windows(2)
        .map(|w| step_gap(w[0].as_ref(), w[1].as_ref()))
        .sum()
}

#[inline]
fn step_gap(from: &[u32], to: &[u32]) -> u64 {
    from.iter()
        .zip(to)
        .map(|(&a, &b)| u64::from(b - a - 1))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlcsResult {
    pub mlcs_len: u32,
    pub paths: Vec<MlcsPath>,
    /// Path texts, deduplicated, in first-occurrence order.
    pub distinct_strings: Vec<String>,
    pub total_path_count: BigUint,
    pub truncated: bool,
    /// `Some(k)` for top-k results, `None` for exhaustive enumeration.
    pub requested_k: Option<usize>,
}

impl MlcsResult {
    fn assemble(
        dag: &KeyPointDag,
        mut paths: Vec<MlcsPath>,
        truncated: bool,
        requested_k: Option<usize>,
    ) -> Self {
        paths.sort_by(MlcsPath::canonical_cmp);
        let mut distinct_strings: Vec<String> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for p in &paths {
            if seen.insert(p.text.as_str()) {
                distinct_strings.push(p.text.clone());
            }
        }
        Self {
            mlcs_len: dag.mlcs_len(),
            paths,
            distinct_strings,
            total_path_count: count_paths(dag),
            truncated,
            requested_k,
        }
    }
}

/// Depth-first enumeration of every path in canonical child order, stopping
/// after `cap` paths.
pub fn enumerate_all(dag: &KeyPointDag, cap: usize) -> MlcsResult {
    let (paths, truncated) = forward_paths(dag, cap);
    MlcsResult::assemble(dag, paths, truncated, None)
}

fn forward_paths(dag: &KeyPointDag, cap: usize) -> (Vec<MlcsPath>, bool) {
    let l = dag.mlcs_len() as usize;
    let mut paths = Vec::new();
    if l == 0 {
        return (paths, false);
    }
    let mut stack: Vec<u32> = Vec::with_capacity(l);
    // Next child cursor per depth.
    let mut cursor: Vec<usize> = Vec::with_capacity(l);
    for root in 0..dag.level(1).width() as u32 {
        stack.push(root);
        cursor.push(0);
        while let Some(&top) = stack.last() {
            let depth = stack.len();
            if depth == l {
                if paths.len() == cap {
                    return (paths, true);
                }
                paths.push(MlcsPath::from_nodes(dag, stack.clone()));
                stack.pop();
                cursor.pop();
                continue;
            }
            let kids = &dag.level(depth as u32).succ[top as usize];
            let c = cursor[depth - 1];
            if c < kids.len() {
                cursor[depth - 1] += 1;
                stack.push(kids[c]);
                cursor.push(0);
            } else {
                stack.pop();
                cursor.pop();
            }
        }
    }
    (paths, false)
}

/// Enumerates paths by walking parent links back from the sink.
pub fn trace_back_all(dag: &KeyPointDag, cap: usize) -> MlcsResult {
    let l = dag.mlcs_len();
    let mut paths = Vec::new();
    let mut truncated = false;
    if l > 0 {
        let preds = dag.predecessors();
        let mut rev: Vec<u32> = Vec::with_capacity(l as usize);
        'outer: for last in 0..dag.level(l).width() as u32 {
            let mut stack = vec![(l, last, 0usize)];
            while let Some(&mut (level, index, ref mut next)) = stack.last_mut() {
                if *next == 0 {
                    rev.push(index);
                }
                if level == 1 {
                    if paths.len() == cap {
                        truncated = true;
                        break 'outer;
                    }
                    let nodes: Vec<u32> = rev.iter().rev().copied().collect();
                    paths.push(MlcsPath::from_nodes(dag, nodes));
                    rev.pop();
                    stack.pop();
                    continue;
                }
                let parents = &preds[level as usize - 1][index as usize];
                if *next < parents.len() {
                    let parent = parents[*next];
                    *next += 1;
                    stack.push((level - 1, parent, 0));
                } else {
                    rev.pop();
                    stack.pop();
                }
            }
        }
    }
    MlcsResult::assemble(dag, paths, truncated, None)
}

#[derive(Debug, Clone, Copy)]
struct Suffix {
    gap: u64,
    child: u32,
    rank: u32,
}

const NO_CHILD: u32 = u32::MAX;

/// The `k` paths with the fewest skipped positions under the canonical
/// tie-break, via a per-node k-best suffix DP.
pub fn topk(dag: &KeyPointDag, k: usize) -> Result<MlcsResult, MineError> {
    if k == 0 {
        return Err(MineError::InvalidK);
    }
    let l = dag.mlcs_len() as usize;
    if l == 0 {
        return Ok(MlcsResult::assemble(dag, Vec::new(), false, Some(k)));
    }
    // best[li][node] holds the k smallest suffixes starting at that node.
    let mut best: Vec<Vec<Vec<Suffix>>> = vec![Vec::new(); l];
    best[l - 1] = vec![
        vec![Suffix {
            gap: 0,
            child: NO_CHILD,
            rank: 0,
        }];
        dag.level(l as u32).width()
    ];
    for li in (0..l - 1).rev() {
        let level = &dag.levels()[li];
        let next = &dag.levels()[li + 1];
        let below = &best[li + 1];
        let mut here = Vec::with_capacity(level.width());
        for (node, kids) in level.nodes.iter().zip(&level.succ) {
            let mut cands = Vec::new();
            for &q in kids {
                let step = step_gap(&node.coords, &next.nodes[q as usize].coords);
                for (rank, s) in below[q as usize].iter().enumerate() {
                    cands.push(Suffix {
                        gap: step + s.gap,
                        child: q,
                        rank: rank as u32,
                    });
                }
            }
            cands.sort_by(|a, b| {
                a.gap.cmp(&b.gap).then_with(|| {
                    suffix_cmp(dag, &best, li + 1, (a.child, a.rank), (b.child, b.rank))
                })
            });
            cands.truncate(k);
            here.push(cands);
        }
        best[li] = here;
    }

    let mut heads: Vec<(u64, u32, u32)> = best[0]
        .iter()
        .enumerate()
        .flat_map(|(n, list)| {
            list.iter()
                .enumerate()
                .map(move |(r, s)| (s.gap, n as u32, r as u32))
        })
        .collect();
    heads.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| suffix_cmp(dag, &best, 0, (a.1, a.2), (b.1, b.2)))
    });
    heads.truncate(k);

    let paths = heads
        .into_iter()
        .map(|(_, node, rank)| {
            let mut nodes = Vec::with_capacity(l);
            let (mut n, mut r) = (node, rank);
            for li in 0..l {
                nodes.push(n);
                let s = best[li][n as usize][r as usize];
                (n, r) = (s.child, s.rank);
            }
            MlcsPath::from_nodes(dag, nodes)
        })
        .collect();
    Ok(MlcsResult::assemble(dag, paths, false, Some(k)))
}

/// Compares two stored suffixes of the same level by text, then embedding.
fn suffix_cmp(
    dag: &KeyPointDag,
    best: &[Vec<Vec<Suffix>>],
    li: usize,
    a: (u32, u32),
    b: (u32, u32),
) -> Ordering {
    if a.0 == b.0 {
        // Same node: stored lists are already in canonical order.
        return a.1.cmp(&b.1);
    }
    let walk = |key: &dyn Fn(&crate::dag::KeyNode, &crate::dag::KeyNode) -> Ordering| {
        let (mut x, mut y) = (a, b);
        for level in li..best.len() {
            let nodes = &dag.levels()[level].nodes;
            let ord = key(&nodes[x.0 as usize], &nodes[y.0 as usize]);
            if ord != Ordering::Equal {
                return ord;
            }
            let sx = best[level][x.0 as usize][x.1 as usize];
            let sy = best[level][y.0 as usize][y.1 as usize];
            x = (sx.child, sx.rank);
            y = (sy.child, sy.rank);
        }
        Ordering::Equal
    };
    walk(&|p, q| p.code.cmp(&q.code)).then_with(|| walk(&|p, q| p.coords.cmp(&q.coords)))
}

#[cfg(test)]
mod tests {
    use std::ops::ControlFlow;

    use super::*;
    use crate::dag::{expand_reachable, label_and_filter, ExpandOptions};
    use crate::sequence::ProblemInstance;
    use crate::successor::SuccessorTable;

    fn dag(seqs: &[&str]) -> KeyPointDag {
        let inst = ProblemInstance::from_strs(seqs).unwrap();
        let tab = SuccessorTable::build(&inst);
        let raw = expand_reachable(&inst, &tab, ExpandOptions::default(), |_| {
            ControlFlow::Continue(())
        })
        .unwrap();
        label_and_filter(&raw, inst.alphabet())
    }

    fn texts_gaps(r: &MlcsResult) -> Vec<(String, u64)> {
        r.paths.iter().map(|p| (p.text.clone(), p.gap_score)).collect()
    }

    #[test]
    fn gap_formula() {
        assert_eq!(gap_score(&[[1u32, 1, 1], [3, 3, 3]]), 3);
        assert_eq!(gap_score(&[[4u32, 7]]), 0);
        assert_eq!(gap_score::<[u32; 2]>(&[]), 0);
        assert_eq!(gap_score(&[[1u32, 1], [2, 2], [3, 3]]), 0);
    }

    #[test]
    fn enumerate_examples() {
        let r = enumerate_all(&dag(&["ACGT", "ACGT", "ACGT"]), 10);
        assert_eq!(texts_gaps(&r), vec![("ACGT".into(), 0)]);

        let r = enumerate_all(&dag(&["AC", "CA", "AC"]), 10);
        assert_eq!(r.mlcs_len, 1);
        assert_eq!(r.distinct_strings, vec!["A", "C"]);

        let r = enumerate_all(&dag(&["ABC", "ACB", "ABC"]), 10);
        assert_eq!(texts_gaps(&r), vec![("AB".into(), 1), ("AC".into(), 2)]);
        assert!(!r.truncated);
    }

    #[test]
    fn enumeration_cap_truncates() {
        let r = enumerate_all(&dag(&["ABC", "ACB", "ABC"]), 1);
        assert_eq!(r.paths.len(), 1);
        assert!(r.truncated);
        assert_eq!(r.total_path_count, BigUint::from(2u32));
    }

    #[test]
    fn topk_examples() {
        let g = dag(&["ABC", "ACB", "ABC"]);
        let r = topk(&g, 1).unwrap();
        assert_eq!(texts_gaps(&r), vec![("AB".into(), 1)]);
        assert_eq!(topk(&g, 5).unwrap().paths, enumerate_all(&g, 100).paths);

        let r = topk(&dag(&["AGC", "AGC", "AC"]), 1).unwrap();
        assert_eq!(texts_gaps(&r), vec![("AC".into(), 2)]);

        let r = topk(&dag(&["AXC", "AYC", "AZC"]), 3).unwrap();
        assert_eq!(texts_gaps(&r), vec![("AC".into(), 3)]);

        assert!(matches!(topk(&g, 0), Err(MineError::InvalidK)));
    }

    #[test]
    fn traceback_matches_forward() {
        let g = dag(&["GATTACA", "TAGACCA", "ATTAGCA"]);
        let f = enumerate_all(&g, 1000);
        let b = trace_back_all(&g, 1000);
        assert_eq!(f.paths, b.paths);
    }

    #[test]
    fn empty_dag_results() {
        let g = dag(&["A", "C"]);
        let r = enumerate_all(&g, 10);
        assert!(r.paths.is_empty());
        assert_eq!(r.total_path_count, BigUint::from(1u32));
        assert!(topk(&g, 3).unwrap().paths.is_empty());
    }
}
