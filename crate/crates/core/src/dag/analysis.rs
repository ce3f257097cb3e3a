use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::KeyPointDag;

/// Number of source-to-sink paths, by exact backward DP over levels.
///
/// An empty DAG has one (empty) path.
pub fn count_paths(dag: &KeyPointDag) -> BigUint {
    let levels = dag.levels();
    let Some(last) = levels.last() else {
        return BigUint::one();
    };
    let mut ways: Vec<BigUint> = vec![BigUint::one(); last.width()];
    for level in levels.iter().rev().skip(1) {
        ways = level
            .succ
            .iter()
            .map(|kids| {
                kids.iter().fold(BigUint::zero(), |acc, &k| acc + &ways[k as usize])
            })
            .collect();
    }
    ways.into_iter().sum()
}

/// Maximal run of width-1 levels; its text is shared by every MLCS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSegment {
    pub from_level: u32,
    pub to_level: u32,
    pub text: String,
}

pub fn common_patterns(dag: &KeyPointDag) -> Vec<PatternSegment> {
    let mut out = Vec::new();
    let mut run: Option<PatternSegment> = None;
    for (li, level) in dag.levels().iter().enumerate() {
        let lvl = li as u32 + 1;
        if level.width() != 1 {
            out.extend(run.take());
            continue;
        }
        let ch = dag.alphabet().symbol(level.nodes[0].code);
        match run.as_mut() {
            // Single nodes of adjacent width-1 levels must be linked to chain.
            Some(seg) if dag.level(seg.to_level).succ[0].contains(&0) => {
                seg.to_level = lvl;
                seg.text.push(ch);
            }
            _ => {
                out.extend(run.take());
                run = Some(PatternSegment {
                    from_level: lvl,
                    to_level: lvl,
                    text: ch.to_string(),
                });
            }
        }
    }
    out.extend(run);
    out
}
