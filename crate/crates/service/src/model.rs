//! Wire types of the job API.

use kpmlcs::pipeline::{Expansion, MineParams, MiningMode};
use kpmlcs::samples::sample;
use kpmlcs::sequence::{parse_input_with, ParseOptions};
use kpmlcs::{InputFormat, ProblemInstance, PruneMode};
use serde::{Deserialize, Serialize};

/// Top-k size used when a top-k job does not name one.
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Topk,
}

/// Body of `POST /api/jobs`. Exactly one of `input`, `sequences` or `sample`
/// supplies the data.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobRequest {
    /// Raw text, either one sequence per line or FASTA.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<String>,
    /// Format of `input`; sniffed from a leading `>` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<InputFormat>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_budget: Option<u64>,
    #[serde(default)]
    pub prune: PruneMode,
}

/// Parameters echoed back in a job record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobParams {
    pub mode: Mode,
    pub k: Option<usize>,
    pub memory_budget: Option<u64>,
    pub node_budget: u64,
    pub prune: PruneMode,
}

impl JobRequest {
    /// Validates the request and builds the instance it describes.
    pub fn instance(&self) -> Result<ProblemInstance, String> {
        let sources =
            usize::from(self.input.is_some()) + usize::from(self.sequences.is_some()) + usize::from(self.sample.is_some());
        if sources != 1 {
            return Err("provide exactly one of input, sequences or sample".into());
        }
        let opts = ParseOptions::default();
        if let Some(raw) = &self.input {
            let format = self.format.unwrap_or_else(|| InputFormat::detect(raw));
            return parse_input_with(raw, format, &opts).map_err(|e| e.to_string());
        }
        if let Some(seqs) = &self.sequences {
            return parse_input_with(&seqs.join("\n"), InputFormat::PlainLines, &opts)
                .map_err(|e| e.to_string());
        }
        let name = self.sample.as_deref().unwrap_or_default();
        sample(name)
            .map(|s| s.instance())
            .ok_or_else(|| format!("unknown sample {name:?}"))
    }

    pub fn params(&self, default_node_budget: u64, default_memory: Option<u64>) -> Result<JobParams, String> {
        let k = match (self.mode, self.k) {
            (Mode::Topk, Some(0)) => return Err("k must be at least 1".into()),
            (Mode::Topk, k) => Some(k.unwrap_or(DEFAULT_K)),
            (Mode::Exact, Some(_)) => return Err("k is only valid with mode topk".into()),
            (Mode::Exact, None) => None,
        };
        if self.node_budget == Some(0) {
            return Err("node_budget must be positive".into());
        }
        Ok(JobParams {
            mode: self.mode,
            k,
            memory_budget: self.memory_budget.or(default_memory),
            node_budget: self.node_budget.unwrap_or(default_node_budget),
            prune: self.prune,
        })
    }
}

impl JobParams {
    pub fn mine_params(&self) -> MineParams {
        let mut p = match self.k {
            Some(k) => MineParams::topk(k),
            None => MineParams::exact(),
        };
        p.node_budget = self.node_budget;
        p.prune = self.prune;
        p
    }

    pub fn mining_mode(&self) -> MiningMode {
        self.mine_params().mode
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
    Canceled,
}

impl JobState {
    pub fn is_terminal(self) -> bool {
        matches!(self, JobState::Done | JobState::Failed | JobState::Canceled)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub wave: u32,
    pub nodes: u64,
    pub edges: u64,
    pub spilled_levels: u32,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobRecord {
    pub job_id: String,
    pub params: JobParams,
    pub state: JobState,
    pub progress: Progress,
    /// File names inside the job's artifact directory.
    pub artifacts: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<Expansion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Progress,
    Spill,
    Done,
    Failed,
    Canceled,
}

/// One server-push message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressEvent {
    #[serde(rename = "type")]
    pub kind: EventKind,
    pub wave: u32,
    pub nodes: u64,
    pub edges: u64,
    pub spilled_levels: u32,
    pub elapsed_ms: u64,
    /// Spilled level, for spill events.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bytes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ProgressEvent {
    pub fn new(kind: EventKind, p: &Progress) -> Self {
        Self {
            kind,
            wave: p.wave,
            nodes: p.nodes,
            edges: p.edges,
            spilled_levels: p.spilled_levels,
            elapsed_ms: p.elapsed_ms,
            level: None,
            bytes: None,
            error: None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, EventKind::Done | EventKind::Failed | EventKind::Canceled)
    }
}
