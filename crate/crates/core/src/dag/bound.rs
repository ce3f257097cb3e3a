//! Upper bounds on prefix and suffix MLCS lengths from pairwise LCS tables.
//!
//! A point `p` can only be a key point if the longest common prefix ending at
//! `p` plus the longest common suffix after `p` reaches the MLCS length. Both
//! are bounded above by the same quantity for any pair of sequences, so the
//! minimum over a set of pairs is a valid filter.

use crate::sequence::ProblemInstance;

/// Total table entries (over all pairs, both directions) we are willing to hold.
const ENTRY_BUDGET: usize = 64 << 20;

#[derive(Debug, Clone)]
struct PairTables {
    a: usize,
    b: usize,
    stride: usize,
    /// LCS of the first `i` symbols of `a` and first `j` of `b`.
    prefix: Vec<u16>,
    /// LCS of `a` after position `i` and `b` after position `j`.
    suffix: Vec<u16>,
}

#[derive(Debug, Clone)]
pub struct KeyBound {
    target: u32,
    pairs: Vec<PairTables>,
}

impl KeyBound {
    /// Builds tables for as many sequence pairs as the entry budget allows.
    /// Returns `None` when not even one pair fits.
    pub fn build(inst: &ProblemInstance, target: u32) -> Option<Self> {
        let seqs = inst.sequences();
        if seqs.iter().any(|s| s.len() >= u16::MAX as usize) {
            return None;
        }
        let mut pairs = Vec::new();
        let mut used = 0usize;
        'outer: for a in 0..seqs.len() {
            for b in a + 1..seqs.len() {
                let cells = (seqs[a].len() + 1) * (seqs[b].len() + 1);
                if used + 2 * cells > ENTRY_BUDGET {
                    break 'outer;
                }
                used += 2 * cells;
                pairs.push(pair_tables(a, b, seqs[a].residues(), seqs[b].residues()));
            }
        }
        (!pairs.is_empty()).then_some(Self { target, pairs })
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// False only if `p` provably lies on no path of `target` match points.
    #[inline]
    pub fn admits(&self, p: &[u32]) -> bool {
        let mut before = u32::MAX;
        let mut after = u32::MAX;
        for t in &self.pairs {
            let cell = p[t.a] as usize * t.stride + p[t.b] as usize;
            before = before.min(u32::from(t.prefix[cell]));
            after = after.min(u32::from(t.suffix[cell]));
            if before + after < self.target {
                return false;
            }
        }
        true
    }
}

fn pair_tables(a: usize, b: usize, x: &[u8], y: &[u8]) -> PairTables {
    let (n, m) = (x.len(), y.len());
    let stride = m + 1;
    let mut prefix = vec![0u16; (n + 1) * stride];
    for i in 1..=n {
        for j in 1..=m {
            prefix[i * stride + j] = if x[i - 1] == y[j - 1] {
                prefix[(i - 1) * stride + j - 1] + 1
            } else {
                prefix[(i - 1) * stride + j].max(prefix[i * stride + j - 1])
            };
        }
    }
    let mut suffix = vec![0u16; (n + 1) * stride];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            suffix[i * stride + j] = if x[i] == y[j] {
                suffix[(i + 1) * stride + j + 1] + 1
            } else {
                suffix[(i + 1) * stride + j].max(suffix[i * stride + j + 1])
            };
        }
    }
    PairTables {
        a,
        b,
        stride,
        prefix,
        suffix,
    }
}
