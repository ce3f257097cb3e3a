//! Layer-wise spill of the key-point DAG under a memory budget.

mod store;

use std::collections::VecDeque;
use std::path::PathBuf;

pub use store::{
    decode_level, encode_level, level_file_name, LayerStore, LevelEntry, LevelHandle, Manifest,
    FORMAT_VERSION, LEVEL_MAGIC, MANIFEST_FILE, MANIFEST_MAGIC,
};

use crate::dag::{KeyPointDag, Level, LevelSink};
use crate::error::{MineError, PersistError};
use crate::sequence::Alphabet;

/// Bytes per node for the code, fd and bd labels.
const LABEL_BYTES: u64 = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryBudget {
    pub limit_bytes: u64,
    /// Fraction of `limit_bytes` at which spilling starts.
    pub high_water: f64,
}

impl MemoryBudget {
    pub fn new(limit_bytes: u64) -> Self {
        Self {
            limit_bytes,
            high_water: 0.8,
        }
    }

    pub fn threshold_bytes(&self) -> u64 {
        (self.limit_bytes as f64 * self.high_water) as u64
    }

    /// Estimated resident size of one level: per node `d` coordinates, the
    /// labels, and one slot per outgoing edge.
    pub fn level_bytes(level: &Level, d: usize) -> u64 {
        level.nodes.len() as u64 * (4 * d as u64 + LABEL_BYTES) + 4 * level.edge_count() as u64
    }
}

/// One level moved from memory to disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpillAction {
    pub level: u32,
    pub bytes: u64,
}

/// A DAG under construction whose oldest levels may live on disk.
#[derive(Debug)]
pub struct PagedDag {
    alphabet: Alphabet,
    d: usize,
    store_dir: PathBuf,
    job_id: String,
    store: Option<LayerStore>,
    mlcs_len: u32,
    budget: Option<MemoryBudget>,
    spilled: u32,
    resident: VecDeque<Level>,
    actions: Vec<SpillAction>,
}

impl PagedDag {
    pub fn new(
        alphabet: Alphabet,
        d: usize,
        store_dir: impl Into<PathBuf>,
        job_id: &str,
        budget: Option<MemoryBudget>,
    ) -> Self {
        Self {
            alphabet,
            d,
            store_dir: store_dir.into(),
            job_id: job_id.to_string(),
            store: None,
            mlcs_len: 0,
            budget,
            spilled: 0,
            resident: VecDeque::new(),
            actions: Vec::new(),
        }
    }

    pub fn set_mlcs_len(&mut self, mlcs_len: u32) {
        self.mlcs_len = mlcs_len;
    }

    pub fn resident_bytes(&self) -> u64 {
        self.resident
            .iter()
            .map(|l| MemoryBudget::level_bytes(l, self.d))
            .sum()
    }

    pub fn resident_levels(&self) -> std::ops::RangeInclusive<u32> {
        self.spilled + 1..=self.spilled + self.resident.len() as u32
    }

    pub fn spilled_levels(&self) -> u32 {
        self.spilled
    }

    pub fn actions(&self) -> &[SpillAction] {
        &self.actions
    }

    fn store(&mut self) -> Result<&mut LayerStore, PersistError> {
        if self.store.is_none() {
            self.store = Some(LayerStore::create(
                &self.store_dir,
                &self.job_id,
                &self.alphabet,
                self.d,
                self.mlcs_len,
            )?);
        }
        Ok(self.store.as_mut().expect("just created"))
    }

    /// Writes the eldest resident level to disk and drops it from memory.
    fn spill_eldest(&mut self) -> Result<SpillAction, PersistError> {
        let level_no = self.spilled + 1;
        let level = self.resident.pop_front().expect("caller checked residency");
        let handle = match self.store()?.write_level(level_no, &level) {
            Ok(h) => h,
            Err(e) => {
                self.resident.push_front(level);
                return Err(e);
            }
        };
        self.spilled = level_no;
        let action = SpillAction {
            level: level_no,
            bytes: handle.byte_len,
        };
        self.actions.push(action);
        Ok(action)
    }

    /// Spills every resident level, leaving the full DAG on disk.
    pub fn spill_all(&mut self) -> Result<&LayerStore, PersistError> {
        while !self.resident.is_empty() {
            self.spill_eldest()?;
        }
        self.store()?;
        Ok(self.store.as_ref().expect("store exists"))
    }

    /// Reassembles the whole DAG, reading spilled levels back layer by layer.
    pub fn into_dag(mut self) -> Result<KeyPointDag, PersistError> {
        let mut levels = Vec::with_capacity(self.spilled as usize + self.resident.len());
        if let Some(store) = &self.store {
            for l in 1..=self.spilled {
                levels.extend(store.read_levels(l, l)?);
            }
        }
        levels.extend(self.resident.drain(..));
        Ok(KeyPointDag::from_levels(self.alphabet, self.d, levels))
    }
}

/// Spills eldest levels until the resident estimate drops below the high-water
/// mark. The two newest levels always stay in memory. Fails if they alone
/// exceed the hard limit.
pub fn enforce_budget(
    budget: &MemoryBudget,
    dag: &mut PagedDag,
) -> Result<Vec<SpillAction>, MineError> {
    let mut actions = Vec::new();
    let threshold = budget.threshold_bytes();
    while dag.resident_bytes() >= threshold && dag.resident.len() > 2 {
        actions.push(dag.spill_eldest()?);
    }
    let resident = dag.resident_bytes();
    if resident >= budget.limit_bytes {
        return Err(MineError::MemoryBudget {
            resident_bytes: resident,
            limit_bytes: budget.limit_bytes,
        });
    }
    Ok(actions)
}

impl LevelSink for PagedDag {
    fn push_level(&mut self, level: Level) -> Result<(), MineError> {
        self.resident.push_back(level);
        if let Some(budget) = self.budget {
            enforce_budget(&budget, self)?;
        }
        Ok(())
    }
}
