//! Exhaustive dynamic-programming MLCS oracle and the randomized
//! equivalence check that compares it against the key-point DAG.
//!
//! The oracle fills the full d-dimensional suffix table, so it is only
//! practical for small instances (n <= 14, d <= 5 is comfortable).

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::miner::enumerate_all;
use crate::pipeline::{mine, MineParams, PruneMode};
use crate::samples::random_instance;
use crate::sequence::ProblemInstance;

/// Length and complete string set of the MLCS, by classic DP.
pub fn dp_mlcs(inst: &ProblemInstance) -> (u32, BTreeSet<String>) {
    let seqs: Vec<&[u8]> = inst.sequences().iter().map(|s| s.residues()).collect();
    let dims: Vec<usize> = seqs.iter().map(|s| s.len() + 1).collect();
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let cells: usize = dims.iter().product();
    let unflatten = |mut flat: usize| -> Vec<usize> {
        let mut idx = vec![0; dims.len()];
        for k in 0..dims.len() {
            idx[k] = flat / strides[k];
            flat %= strides[k];
        }
        idx
    };
    let all_strides: usize = strides.iter().sum();

    // table[cell] = LCS length of the suffixes starting at the cell's indices.
    let mut table = vec![0u32; cells];
    for flat in (0..cells).rev() {
        let idx = unflatten(flat);
        if idx.iter().zip(&dims).any(|(&i, &n)| i + 1 == n) {
            continue;
        }
        let c = seqs[0][idx[0]];
        table[flat] = if seqs.iter().zip(&idx).all(|(s, &i)| s[i] == c) {
            1 + table[flat + all_strides]
        } else {
            strides.iter().map(|&st| table[flat + st]).max().unwrap_or(0)
        };
    }

    let mut memo: HashMap<usize, Rc<BTreeSet<Vec<u8>>>> = HashMap::new();
    let strings = collect(0, &seqs, &table, &strides, all_strides, &unflatten, &mut memo);
    let set = strings
        .iter()
        .map(|codes| inst.alphabet().decode(codes))
        .collect();
    (table[0], set)
}

fn collect(
    flat: usize,
    seqs: &[&[u8]],
    table: &[u32],
    strides: &[usize],
    all_strides: usize,
    unflatten: &dyn Fn(usize) -> Vec<usize>,
    memo: &mut HashMap<usize, Rc<BTreeSet<Vec<u8>>>>,
) -> Rc<BTreeSet<Vec<u8>>> {
    if let Some(hit) = memo.get(&flat) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    if table[flat] == 0 {
        out.insert(Vec::new());
    } else {
        let idx = unflatten(flat);
        let c = seqs[0][idx[0]];
        if seqs.iter().zip(&idx).all(|(s, &i)| s[i] == c) {
            for tail in collect(flat + all_strides, seqs, table, strides, all_strides, unflatten, memo).iter() {
                let mut s = vec![c];
                s.extend_from_slice(tail);
                out.insert(s);
            }
        } else {
            for &st in strides {
                if table[flat + st] == table[flat] {
                    out.extend(collect(flat + st, seqs, table, strides, all_strides, unflatten, memo).iter().cloned());
                }
            }
        }
    }
    let out = Rc::new(out);
    memo.insert(flat, out.clone());
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub instances: usize,
    pub seed: u64,
    pub max_len: usize,
    pub d_choices: Vec<usize>,
    pub sigma_choices: Vec<usize>,
    pub prune: PruneMode,
    /// Drop one decoded string before comparing; used to prove the check bites.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            instances: 200,
            seed: 0x5eed,
            max_len: 14,
            d_choices: vec![3, 4, 5],
            sigma_choices: vec![2, 4],
            prune: PruneMode::Off,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub sequences: Vec<String>,
    pub oracle_len: u32,
    pub engine_len: u32,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifyReport {
    pub instances: usize,
    pub total_strings: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares engine and oracle on one instance.
pub fn check_instance(inst: &ProblemInstance, prune: PruneMode, inject_fault: bool) -> Option<Mismatch> {
    let (oracle_len, oracle) = dp_mlcs(inst);
    let mut params = MineParams::exact();
    params.prune = prune;
    let outcome = mine(inst, &params).expect("small instances fit every budget");
    let result = enumerate_all(&outcome.dag, usize::MAX);
    let mut engine: BTreeSet<String> = result.distinct_strings.into_iter().collect();
    if outcome.dag.mlcs_len() == 0 {
        engine.insert(String::new());
    }
    if inject_fault {
        let last = engine.iter().next_back().cloned();
        if let Some(last) = last {
            engine.remove(&last);
        }
    }
    let engine_len = outcome.dag.mlcs_len();
    if engine_len == oracle_len && engine == oracle {
        return None;
    }
    Some(Mismatch {
        sequences: (0..inst.d()).map(|i| inst.text(i)).collect(),
        oracle_len,
        engine_len,
        missing: oracle.difference(&engine).cloned().collect(),
        extra: engine.difference(&oracle).cloned().collect(),
    })
}

/// Seeded random instances, in generation order.
pub fn random_suite(cfg: &VerifyConfig) -> Vec<ProblemInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.instances)
        .map(|_| {
            let d = cfg.d_choices[rng.gen_range(0..cfg.d_choices.len())];
            let sigma = cfg.sigma_choices[rng.gen_range(0..cfg.sigma_choices.len())];
            random_instance(&mut rng, d, 1..=cfg.max_len, sigma)
        })
        .collect()
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    for inst in random_suite(cfg) {
        report.instances += 1;
        if let Some(m) = check_instance(&inst, cfg.prune, cfg.inject_fault) {
            report.mismatches.push(m);
        } else {
            report.total_strings += dp_mlcs(&inst).1.len();
        }
    }
    report
}
