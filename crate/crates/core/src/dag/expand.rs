use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::bound::KeyBound;
use super::DagStats;
use crate::error::MineError;
use crate::sequence::ProblemInstance;
use crate::successor::SuccessorTable;

/// Frontier size above which successor generation is spread over the rayon pool.
const PARALLEL_FRONTIER: usize = 256;

#[derive(Debug, Clone)]
pub struct ExpandOptions {
    /// Drop points strictly dominated by another point of the same wave.
    pub prune_dominated: bool,
    /// Skip points that provably cannot be key points.
    pub key_bound: Option<Arc<KeyBound>>,
    /// Abort once more than this many distinct points would be expanded.
    pub node_budget: u64,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        Self {
            prune_dominated: false,
            key_bound: None,
            node_budget: 50_000_000,
        }
    }
}

/// Counters reported at every wave boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WaveProgress {
    pub wave: u32,
    pub nodes: u64,
    pub edges: u64,
}

/// Memoized match-point graph reachable from the source by minimal successors.
#[derive(Debug, Clone)]
pub struct RawGraph {
    d: usize,
    coords: Vec<u32>,
    codes: Vec<u8>,
    succ: Vec<Vec<u32>>,
    roots: Vec<u32>,
    edges_examined: u64,
    prior_nodes: u64,
    waves: u32,
}

impl RawGraph {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn node_count(&self) -> usize {
        self.codes.len()
    }

    pub fn coords(&self, id: u32) -> &[u32] {
        let start = id as usize * self.d;
        &self.coords[start..start + self.d]
    }

    pub fn code(&self, id: u32) -> u8 {
        self.codes[id as usize]
    }

    pub fn succ(&self, id: u32) -> &[u32] {
        &self.succ[id as usize]
    }

    /// Nodes linked directly from the source.
    pub fn roots(&self) -> &[u32] {
        &self.roots
    }

    /// Distinct points expanded, including work credited by [`Self::add_prior_work`].
    pub fn nodes_expanded(&self) -> u64 {
        self.codes.len() as u64 + self.prior_nodes
    }

    /// Credits nodes, edges and waves spent in an earlier pass over the same
    /// instance, so the statistics describe the whole construction.
    pub fn add_prior_work(&mut self, nodes: u64, edges: u64, waves: u32) {
        self.prior_nodes += nodes;
        self.edges_examined += edges;
        self.waves += waves;
    }

    pub fn edges_examined(&self) -> u64 {
        self.edges_examined
    }

    pub fn waves(&self) -> u32 {
        self.waves
    }

    /// Distinct points, as (code, coords), in id order.
    pub fn points(&self) -> impl Iterator<Item = (u8, &[u32])> + '_ {
        (0..self.node_count() as u32).map(move |id| (self.code(id), self.coords(id)))
    }
}

type Successors = Vec<(u8, Box<[u32]>)>;

fn successors(tab: &SuccessorTable, from: &[u32]) -> Successors {
    let mut buf = Vec::with_capacity(from.len());
    let mut out = Vec::new();
    for code in 0..tab.sigma() as u8 {
        if tab.step(from, code, &mut buf) {
            out.push((code, buf.as_slice().into()));
        }
    }
    out
}

fn expand_all(tab: &SuccessorTable, points: Vec<&[u32]>) -> Vec<Successors> {
    if points.len() >= PARALLEL_FRONTIER {
        points.par_iter().map(|p| successors(tab, p)).collect()
    } else {
        points.iter().map(|p| successors(tab, p)).collect()
    }
}

struct Builder {
    d: usize,
    index: HashMap<Box<[u32]>, u32>,
    coords: Vec<u32>,
    codes: Vec<u8>,
    budget: u64,
    edges: u64,
    bound: Option<Arc<KeyBound>>,
}

impl Builder {
    /// Id of `point` and whether it is new; `None` if the bound rejects it.
    fn intern(&mut self, code: u8, point: &[u32]) -> Result<Option<(u32, bool)>, MineError> {
        if let Some(&id) = self.index.get(point) {
            return Ok(Some((id, false)));
        }
        if self.bound.as_ref().is_some_and(|b| !b.admits(point)) {
            return Ok(None);
        }
        let id = self.codes.len() as u32;
        if self.codes.len() as u64 >= self.budget {
            return Err(MineError::NodeBudgetExceeded {
                budget: self.budget,
                partial: Box::new(self.partial_stats()),
            });
        }
        self.index.insert(point.into(), id);
        self.coords.extend_from_slice(point);
        self.codes.push(code);
        Ok(Some((id, true)))
    }

    fn point(&self, id: u32) -> &[u32] {
        let start = id as usize * self.d;
        &self.coords[start..start + self.d]
    }

    fn partial_stats(&self) -> DagStats {
        DagStats {
            nodes_expanded: self.codes.len() as u64,
            edges_examined: self.edges,
            key_points: 0,
            mlcs_len: 0,
            level_widths: Vec::new(),
            path_count: BigUint::default(),
        }
    }

    fn progress(&self, wave: u32) -> WaveProgress {
        WaveProgress {
            wave,
            nodes: self.codes.len() as u64,
            edges: self.edges,
        }
    }
}

/// Builds the raw match-point graph reachable from the source.
///
/// `on_wave` runs at every wave boundary; returning `Break` cancels.
pub fn expand_reachable(
    inst: &ProblemInstance,
    tab: &SuccessorTable,
    opts: ExpandOptions,
    mut on_wave: impl FnMut(WaveProgress) -> ControlFlow<()>,
) -> Result<RawGraph, MineError> {
    let d = inst.d();
    let mut b = Builder {
        d,
        index: HashMap::new(),
        coords: Vec::new(),
        codes: Vec::new(),
        budget: opts.node_budget,
        edges: 0,
        bound: opts.key_bound.clone(),
    };
    let source = vec![0u32; d];
    let root_succ = successors(tab, &source);
    b.edges += root_succ.len() as u64;

    let (succ, waves) = if opts.prune_dominated {
        expand_pruned(&mut b, tab, &root_succ, &mut on_wave)?
    } else {
        expand_memoized(&mut b, tab, &root_succ, &mut on_wave)?
    };
    let roots = root_succ
        .iter()
        .filter_map(|(_, p)| b.index.get(p).copied())
        .collect();
    if on_wave(b.progress(waves)).is_break() {
        return Err(MineError::Canceled);
    }
    Ok(RawGraph {
        d,
        coords: b.coords,
        codes: b.codes,
        succ,
        roots,
        edges_examined: b.edges,
        prior_nodes: 0,
        waves,
    })
}

fn expand_memoized(
    b: &mut Builder,
    tab: &SuccessorTable,
    root_succ: &Successors,
    on_wave: &mut impl FnMut(WaveProgress) -> ControlFlow<()>,
) -> Result<(Vec<Vec<u32>>, u32), MineError> {
    let mut succ: Vec<Vec<u32>> = Vec::new();
    let mut frontier = Vec::new();
    for (code, p) in root_succ {
        if let Some((id, true)) = b.intern(*code, p)? {
            frontier.push(id);
        }
    }
    let mut wave = 0;
    while !frontier.is_empty() {
        wave += 1;
        if on_wave(b.progress(wave)).is_break() {
            return Err(MineError::Canceled);
        }
        let kids = expand_all(tab, frontier.iter().map(|&id| b.point(id)).collect());
        succ.resize(b.codes.len(), Vec::new());
        let mut next = Vec::new();
        for (&parent, kids) in frontier.iter().zip(kids) {
            b.edges += kids.len() as u64;
            let mut out = Vec::with_capacity(kids.len());
            for (code, p) in kids {
                if let Some((id, fresh)) = b.intern(code, &p)? {
                    if fresh {
                        next.push(id);
                    }
                    out.push(id);
                }
            }
            succ[parent as usize] = out;
        }
        frontier = next;
    }
    succ.resize(b.codes.len(), Vec::new());
    Ok((succ, wave))
}

fn expand_pruned(
    b: &mut Builder,
    tab: &SuccessorTable,
    root_succ: &Successors,
    on_wave: &mut impl FnMut(WaveProgress) -> ControlFlow<()>,
) -> Result<(Vec<Vec<u32>>, u32), MineError> {
    let mut cached: Vec<Option<Successors>> = Vec::new();
    let mut candidates: Vec<(u8, Box<[u32]>)> = root_succ.clone();
    let mut wave = 0;
    loop {
        let survivors = minimal_points(candidates);
        if survivors.is_empty() {
            break;
        }
        wave += 1;
        if on_wave(b.progress(wave)).is_break() {
            return Err(MineError::Canceled);
        }
        let mut ids = Vec::with_capacity(survivors.len());
        for (code, p) in &survivors {
            if let Some((id, _)) = b.intern(*code, p)? {
                ids.push(id);
            }
        }
        cached.resize(b.codes.len(), None);
        let pending: Vec<u32> = ids
            .iter()
            .copied()
            .filter(|&id| cached[id as usize].is_none())
            .collect();
        let kids = expand_all(tab, pending.iter().map(|&id| b.point(id)).collect());
        for (id, kids) in pending.into_iter().zip(kids) {
            b.edges += kids.len() as u64;
            cached[id as usize] = Some(kids);
        }
        candidates = ids
            .iter()
            .flat_map(|&id| cached[id as usize].as_deref().unwrap_or_default().iter().cloned())
            .collect();
    }
    let succ = cached
        .iter()
        .map(|kids| {
            kids.as_deref()
                .unwrap_or_default()
                .iter()
                .filter_map(|(_, p)| b.index.get(p).copied())
                .collect()
        })
        .collect();
    Ok((succ, wave))
}

/// Deduplicates and drops points strictly dominated by another candidate.
fn minimal_points(mut candidates: Vec<(u8, Box<[u32]>)>) -> Vec<(u8, Box<[u32]>)> {
    candidates.sort_unstable_by(|a, b| a.1.cmp(&b.1));
    candidates.dedup_by(|a, b| a.1 == b.1);
    // A dominator always precedes what it dominates in lexicographic order.
    let mut kept: Vec<(u8, Box<[u32]>)> = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let dominated = kept
            .iter()
            .any(|(_, k)| k.iter().zip(cand.1.iter()).all(|(a, b)| a <= b));
        if !dominated {
            kept.push(cand);
        }
    }
    kept
}
