use super::expand::RawGraph;
use super::{KeyNode, KeyPointDag, Level};
use crate::error::MineError;
use crate::sequence::Alphabet;

/// Receives finished levels in increasing order.
pub trait LevelSink {
    fn push_level(&mut self, level: Level) -> Result<(), MineError>;
}

impl LevelSink for Vec<Level> {
    fn push_level(&mut self, level: Level) -> Result<(), MineError> {
        self.push(level);
        Ok(())
    }
}

/// Labels the raw graph and collects the key-point levels in memory.
pub fn label_and_filter(raw: &RawGraph, alphabet: &Alphabet) -> KeyPointDag {
    let mut levels = Vec::new();
    label_into(raw, &mut levels).expect("in-memory sink is infallible");
    KeyPointDag::from_levels(alphabet.clone(), raw.d(), levels)
}

fn topological_order(raw: &RawGraph) -> Vec<u32> {
    // Edges increase every coordinate, so ordering by the first one is topological.
    let mut order: Vec<u32> = (0..raw.node_count() as u32).collect();
    order.sort_unstable_by_key(|&id| raw.coords(id)[0]);
    order
}

fn forward_distances(raw: &RawGraph, order: &[u32]) -> Vec<u32> {
    let mut fd = vec![1u32; raw.node_count()];
    for &id in order {
        let next = fd[id as usize] + 1;
        for &c in raw.succ(id) {
            if fd[c as usize] < next {
                fd[c as usize] = next;
            }
        }
    }
    fd
}

/// Number of match points on the longest path of the raw graph.
pub fn longest_path_len(raw: &RawGraph) -> u32 {
    let order = topological_order(raw);
    forward_distances(raw, &order).into_iter().max().unwrap_or(0)
}

/// Labels the raw graph with longest-path distances and streams the levels of
/// the key-point DAG into `sink`, level 1 first. Returns the MLCS length.
pub fn label_into(raw: &RawGraph, sink: &mut impl LevelSink) -> Result<u32, MineError> {
    let n = raw.node_count();
    if n == 0 {
        return Ok(0);
    }
    let order = topological_order(raw);
    let fd = forward_distances(raw, &order);
    let mut bd = vec![0u32; n];
    for &id in order.iter().rev() {
        bd[id as usize] = raw
            .succ(id)
            .iter()
            .map(|&c| bd[c as usize] + 1)
            .max()
            .unwrap_or(0);
    }
    let mlcs_len = fd.iter().copied().max().unwrap_or(0);

    let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); mlcs_len as usize];
    for id in 0..n as u32 {
        let i = id as usize;
        if fd[i] + bd[i] == mlcs_len {
            by_level[fd[i] as usize - 1].push(id);
        }
    }
    // Canonical order within a level is lexicographic on coordinates.
    let mut slot = vec![u32::MAX; n];
    for ids in &mut by_level {
        ids.sort_unstable_by(|&a, &b| raw.coords(a).cmp(raw.coords(b)));
        for (k, &id) in ids.iter().enumerate() {
            slot[id as usize] = k as u32;
        }
    }

    for ids in &by_level {
        let mut nodes = Vec::with_capacity(ids.len());
        let mut succ = Vec::with_capacity(ids.len());
        for &id in ids {
            let i = id as usize;
            nodes.push(KeyNode {
                coords: raw.coords(id).into(),
                code: raw.code(id),
                fd: fd[i],
                bd: bd[i],
            });
            let mut kids: Vec<u32> = raw
                .succ(id)
                .iter()
                .filter(|&&c| {
                    let c = c as usize;
                    slot[c] != u32::MAX && fd[c] == fd[i] + 1
                })
                .map(|&c| slot[c as usize])
                .collect();
            kids.sort_unstable();
            kids.dedup();
            succ.push(kids);
        }
        sink.push_level(Level { nodes, succ })?;
    }
    Ok(mlcs_len)
}

#[cfg(test)]
mod tests {
    use std::ops::ControlFlow;

    use super::*;
    use crate::dag::{expand_reachable, ExpandOptions};
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

    #[test]
    fn abc_acb_abc() {
        let g = dag(&["ABC", "ACB", "ABC"]);
        assert_eq!(g.mlcs_len(), 2);
        let l1 = g.level(1);
        assert_eq!(l1.nodes.len(), 1);
        assert_eq!(&*l1.nodes[0].coords, &[1, 1, 1]);
        let l2 = g.level(2);
        let coords: Vec<&[u32]> = l2.nodes.iter().map(|n| &*n.coords).collect();
        assert_eq!(coords, vec![&[2, 3, 2][..], &[3, 2, 3][..]]);
        assert_eq!(g.alphabet().symbol(l2.nodes[0].code), 'B');
        assert_eq!(g.alphabet().symbol(l2.nodes[1].code), 'C');
        assert_eq!(l1.succ[0], vec![0, 1]);
        g.check_invariants().unwrap();
    }

    #[test]
    fn identical_sequences_chain() {
        let g = dag(&["ACGT", "ACGT", "ACGT"]);
        assert_eq!(g.mlcs_len(), 4);
        assert_eq!(g.level_widths(), vec![1, 1, 1, 1]);
        for (i, level) in g.levels().iter().enumerate() {
            let p = i as u32 + 1;
            assert_eq!(&*level.nodes[0].coords, &[p, p, p]);
        }
        g.check_invariants().unwrap();
    }

    #[test]
    fn empty_mlcs() {
        let g = dag(&["A", "C", "A"]);
        assert_eq!(g.mlcs_len(), 0);
        assert!(g.levels().is_empty());
        g.check_invariants().unwrap();
    }
}
