//! Next-occurrence index over each input sequence.

use rayon::prelude::*;

use crate::sequence::{ProblemInstance, Sequence};

/// Sentinel for "no further occurrence".
pub const END: u32 = u32::MAX;

/// `next(i, c, j)` is the smallest 1-indexed position `k > j` in sequence `i`
/// holding symbol `c`, or [`END`].
#[derive(Debug, Clone)]
pub struct SuccessorTable {
    sigma: usize,
    // Row-major per sequence: entry [j * sigma + c] for j in 0..=n.
    rows: Vec<Vec<u32>>,
}

impl SuccessorTable {
    pub fn build(inst: &ProblemInstance) -> Self {
        let sigma = inst.alphabet().len();
        let rows = inst
            .sequences()
            .par_iter()
            .map(|seq| build_row(seq, sigma))
            .collect();
        Self { sigma, rows }
    }

    #[inline]
    pub fn next(&self, seq: usize, code: u8, pos: u32) -> u32 {
        self.rows[seq][pos as usize * self.sigma + code as usize]
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    /// Minimal successor of `from` on symbol `code`, written into `out`.
    /// Returns false if some sequence has no further occurrence.
    #[inline]
    pub fn step(&self, from: &[u32], code: u8, out: &mut Vec<u32>) -> bool {
        out.clear();
        for (i, &p) in from.iter().enumerate() {
            let q = self.next(i, code, p);
            if q == END {
                return false;
            }
            out.push(q);
        }
        true
    }
}

// One reverse scan, O(sigma * n) space.
fn build_row(seq: &Sequence, sigma: usize) -> Vec<u32> {
    let n = seq.len();
    let mut row = vec![END; (n + 1) * sigma];
    for j in (0..n).rev() {
        let (head, tail) = row.split_at_mut((j + 1) * sigma);
        head[j * sigma..].copy_from_slice(&tail[..sigma]);
        head[j * sigma + seq.residues()[j] as usize] = (j + 1) as u32;
    }
    row
}
