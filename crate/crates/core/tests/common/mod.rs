#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use kpmlcs::dag::{expand_reachable, label_and_filter, ExpandOptions};
use kpmlcs::{KeyPointDag, MlcsPath, ProblemInstance, SuccessorTable};

pub fn build_dag(inst: &ProblemInstance, prune: bool) -> KeyPointDag {
    let tab = SuccessorTable::build(inst);
    let opts = ExpandOptions {
        prune_dominated: prune,
        ..Default::default()
    };
    let raw = expand_reachable(inst, &tab, opts, |_| ControlFlow::Continue(())).unwrap();
    label_and_filter(&raw, inst.alphabet())
}

pub fn is_subsequence(needle: &str, hay: &str) -> bool {
    let mut it = hay.chars();
    needle.chars().all(|c| it.any(|h| h == c))
}

/// Every longest common subsequence, by trying all subsequences of the
/// shortest input. Independent of the successor table and of any DP.
pub fn brute_force_mlcs(seqs: &[String]) -> (usize, BTreeSet<String>) {
    let shortest = seqs.iter().min_by_key(|s| s.len()).unwrap();
    let chars: Vec<char> = shortest.chars().collect();
    let n = chars.len();
    assert!(n <= 20, "brute force is exponential");
    let mut best = 0;
    let mut found = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let len = mask.count_ones() as usize;
        if len < best {
            continue;
        }
        let cand: String = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| chars[i]).collect();
        if seqs.iter().all(|s| is_subsequence(&cand, s)) {
            if len > best {
                best = len;
                found.clear();
            }
            found.insert(cand);
        }
    }
    (best, found)
}

/// All paths by plain recursion over the level successor lists.
pub fn dfs_paths(dag: &KeyPointDag) -> Vec<Vec<u32>> {
    fn go(dag: &KeyPointDag, level: u32, node: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        cur.push(node);
        if level == dag.mlcs_len() {
            out.push(cur.clone());
        } else {
            for &c in &dag.level(level).succ[node as usize] {
                go(dag, level + 1, c, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    if dag.mlcs_len() == 0 {
        return out;
    }
    for root in 0..dag.level(1).width() as u32 {
        go(dag, 1, root, &mut Vec::new(), &mut out);
    }
    out
}

/// Brute-force ordering of every path by (gap, text, embedding).
pub fn brute_force_sorted(dag: &KeyPointDag) -> Vec<MlcsPath> {
    let mut all: Vec<MlcsPath> = dfs_paths(dag)
        .into_iter()
        .map(|nodes| {
            let embedding: Vec<Vec<u32>> = nodes
                .iter()
                .enumerate()
                .map(|(li, &n)| dag.level(li as u32 + 1).nodes[n as usize].coords.to_vec())
                .collect();
            let text: String = nodes
                .iter()
                .enumerate()
                .map(|(li, &n)| dag.alphabet().symbol(dag.level(li as u32 + 1).nodes[n as usize].code))
                .collect();
            // Gap recomputed directly from the definition.
            let mut gap = 0u64;
            for w in embedding.windows(2) {
                for i in 0..w[0].len() {
                    gap += (w[1][i] - w[0][i] - 1) as u64;
                }
            }
            MlcsPath {
                nodes,
                text,
                embedding: embedding.into_iter().map(Into::into).collect(),
                gap_score: gap,
            }
        })
        .collect();
    all.sort_by(|a, b| (a.gap_score, &a.text, &a.embedding).cmp(&(b.gap_score, &b.text, &b.embedding)));
    all
}

pub fn decoded_strings(dag: &KeyPointDag) -> BTreeSet<String> {
    let r = kpmlcs::enumerate_all(dag, usize::MAX);
    let mut set: BTreeSet<String> = r.distinct_strings.into_iter().collect();
    if dag.mlcs_len() == 0 {
        set.insert(String::new());
    }
    set
}
