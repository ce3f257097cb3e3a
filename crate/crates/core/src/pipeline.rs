//! End-to-end mining: successor table, expansion, labeling (with optional
//! spill to disk), path counting and result selection.

use std::ops::ControlFlow;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dag::{
    common_patterns, expand_reachable, label_into, longest_path_len, DagStats, ExpandOptions,
    KeyBound, KeyPointDag, Level, LevelSink, PatternSegment, RawGraph, WaveProgress,
};
use crate::error::MineError;
use crate::miner::{enumerate_all, topk, MlcsResult, DEFAULT_ENUMERATION_CAP};
use crate::persistence::{MemoryBudget, PagedDag, SpillAction};
use crate::sequence::ProblemInstance;
use crate::successor::SuccessorTable;

/// Sequences longer than this make `Auto` use the bounded expansion.
pub const AUTO_PRUNE_LENGTH: usize = 200;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// How much of the match-point space is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneMode {
    /// `Off` for short inputs, `Bounded` once any sequence exceeds
    /// [`AUTO_PRUNE_LENGTH`].
    #[default]
    Auto,
    /// Dominance pruning per wave. Finds the exact length and at least one
    /// MLCS, but may miss some of the distinct strings.
    On,
    /// Every reachable match point.
    Off,
    /// A dominance-pruned pass fixes the length, then a second pass skips
    /// points whose pairwise prefix and suffix bounds fall short of it.
    /// Exact, like `Off`.
    Bounded,
}

/// Expansion actually used for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expansion {
    Full,
    Dominance,
    Bounded,
}

impl PruneMode {
    pub fn resolve(self, inst: &ProblemInstance) -> Expansion {
        match self {
            PruneMode::On => Expansion::Dominance,
            PruneMode::Off => Expansion::Full,
            PruneMode::Bounded => Expansion::Bounded,
            PruneMode::Auto if inst.max_len() > AUTO_PRUNE_LENGTH => Expansion::Bounded,
            PruneMode::Auto => Expansion::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiningMode {
    /// Every path, up to a soft cap.
    Exact { cap: usize },
    /// The `k` paths with the fewest skipped positions.
    TopK { k: usize },
}

/// Where and under which budget levels are spilled.
#[derive(Debug, Clone)]
pub struct SpillConfig {
    pub budget: Option<MemoryBudget>,
    pub store_dir: PathBuf,
    pub job_id: String,
    /// Write every level to disk once mining completes.
    pub persist_all: bool,
}

#[derive(Debug, Clone)]
pub struct MineParams {
    pub mode: MiningMode,
    pub prune: PruneMode,
    pub node_budget: u64,
    pub spill: Option<SpillConfig>,
}

impl MineParams {
    pub fn exact() -> Self {
        Self {
            mode: MiningMode::Exact {
                cap: DEFAULT_ENUMERATION_CAP,
            },
            prune: PruneMode::Auto,
            node_budget: DEFAULT_NODE_BUDGET,
            spill: None,
        }
    }

    pub fn topk(k: usize) -> Self {
        Self {
            mode: MiningMode::TopK { k },
            ..Self::exact()
        }
    }
}

/// Observable milestones, reported on the mining thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiningEvent {
    Wave(WaveProgress),
    Spill {
        action: SpillAction,
        spilled_levels: u32,
    },
}

#[derive(Debug, Clone)]
pub struct MiningOutcome {
    pub dag: KeyPointDag,
    pub stats: DagStats,
    pub result: MlcsResult,
    pub patterns: Vec<PatternSegment>,
    pub spills: Vec<SpillAction>,
    pub expansion: Expansion,
}

/// Builds the successor table and raw match-point graph.
///
/// With [`Expansion::Bounded`] the reported waves, nodes and edges run on
/// across both passes. If the bound tables do not fit, the full expansion is
/// used instead and the returned strategy says so.
pub fn build_raw(
    inst: &ProblemInstance,
    expansion: Expansion,
    node_budget: u64,
    on_event: &mut impl FnMut(&MiningEvent) -> ControlFlow<()>,
) -> Result<(RawGraph, Expansion), MineError> {
    let tab = SuccessorTable::build(inst);
    let mut opts = ExpandOptions {
        prune_dominated: expansion == Expansion::Dominance,
        key_bound: None,
        node_budget,
    };
    if expansion != Expansion::Bounded {
        let raw = expand_reachable(inst, &tab, opts, |w| on_event(&MiningEvent::Wave(w)))?;
        return Ok((raw, expansion));
    }

    opts.prune_dominated = true;
    let first = expand_reachable(inst, &tab, opts.clone(), |w| on_event(&MiningEvent::Wave(w)))?;
    let target = longest_path_len(&first);
    let (nodes, edges, waves) = (first.nodes_expanded(), first.edges_examined(), first.waves());
    drop(first);

    opts.prune_dominated = false;
    opts.node_budget = node_budget.saturating_sub(nodes);
    opts.key_bound = KeyBound::build(inst, target).map(Arc::new);
    let used = if opts.key_bound.is_some() { Expansion::Bounded } else { Expansion::Full };
    let mut raw = expand_reachable(inst, &tab, opts, |w| {
        on_event(&MiningEvent::Wave(WaveProgress {
            wave: w.wave + waves,
            nodes: w.nodes + nodes,
            edges: w.edges + edges,
        }))
    })
    .map_err(|e| match e {
        MineError::NodeBudgetExceeded { mut partial, .. } => {
            partial.nodes_expanded += nodes;
            partial.edges_examined += edges;
            MineError::NodeBudgetExceeded {
                budget: node_budget,
                partial,
            }
        }
        other => other,
    })?;
    raw.add_prior_work(nodes, edges, waves);
    Ok((raw, used))
}

pub fn mine(inst: &ProblemInstance, params: &MineParams) -> Result<MiningOutcome, MineError> {
    mine_with(inst, params, |_| ControlFlow::Continue(()))
}

/// Runs the full pipeline. `on_event` may return `Break` to cancel at the
/// next wave or level boundary.
pub fn mine_with(
    inst: &ProblemInstance,
    params: &MineParams,
    mut on_event: impl FnMut(&MiningEvent) -> ControlFlow<()>,
) -> Result<MiningOutcome, MineError> {
    if let MiningMode::TopK { k: 0 } = params.mode {
        return Err(MineError::InvalidK);
    }
    let (raw, expansion) =
        build_raw(inst, params.prune.resolve(inst), params.node_budget, &mut on_event)?;

    let (dag, spills) = match &params.spill {
        None => {
            let mut levels: Vec<Level> = Vec::new();
            label_into(&raw, &mut levels)?;
            (KeyPointDag::from_levels(inst.alphabet().clone(), inst.d(), levels), Vec::new())
        }
        Some(cfg) => {
            let mut paged = PagedDag::new(
                inst.alphabet().clone(),
                inst.d(),
                &cfg.store_dir,
                &cfg.job_id,
                cfg.budget,
            );
            let mut sink = ReportingSink {
                paged: &mut paged,
                on_event: &mut on_event,
                started: false,
            };
            label_into(&raw, &mut sink)?;
            if cfg.persist_all {
                paged.spill_all()?;
            }
            let spills = paged.actions().to_vec();
            (paged.into_dag()?, spills)
        }
    };

    let stats = DagStats::new(&raw, &dag);
    let patterns = common_patterns(&dag);
    let result = match params.mode {
        MiningMode::Exact { cap } => enumerate_all(&dag, cap),
        MiningMode::TopK { k } => topk(&dag, k)?,
    };
    Ok(MiningOutcome {
        dag,
        stats,
        result,
        patterns,
        spills,
        expansion,
    })
}

struct ReportingSink<'a, F> {
    paged: &'a mut PagedDag,
    on_event: &'a mut F,
    started: bool,
}

impl<F: FnMut(&MiningEvent) -> ControlFlow<()>> LevelSink for ReportingSink<'_, F> {
    fn push_level(&mut self, level: Level) -> Result<(), MineError> {
        if !self.started {
            // All nodes of level 1 share fd = 1 and bd = L - 1.
            let l = level.nodes.first().map_or(0, |n| n.fd + n.bd);
            self.paged.set_mlcs_len(l);
            self.started = true;
        }
        let before = self.paged.actions().len();
        self.paged.push_level(level)?;
        let spilled_levels = self.paged.spilled_levels();
        for &action in &self.paged.actions()[before..] {
            if (self.on_event)(&MiningEvent::Spill {
                action,
                spilled_levels,
            })
            .is_break()
            {
                return Err(MineError::Canceled);
            }
        }
        Ok(())
    }
}
