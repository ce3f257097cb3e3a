use std::path::PathBuf;

use kpmlcs::pipeline::DEFAULT_NODE_BUDGET;

/// Default for `max_concurrent_jobs`.
pub const DEFAULT_MAX_CONCURRENT_JOBS: usize = 2;
pub const DEFAULT_QUEUE_CAPACITY: usize = 64;
pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub artifact_dir: PathBuf,
    pub max_concurrent_jobs: usize,
    /// Jobs allowed to wait for a slot before submissions are refused.
    pub queue_capacity: usize,
    /// Default memory budget in bytes for jobs that do not set one.
    pub memory_budget: Option<u64>,
    pub node_budget: u64,
    /// Built browser UI to serve at `/`, if any.
    pub ui_dir: Option<PathBuf>,
}

impl ServiceConfig {
    pub fn new(artifact_dir: impl Into<PathBuf>) -> Self {
        Self {
            artifact_dir: artifact_dir.into(),
            max_concurrent_jobs: DEFAULT_MAX_CONCURRENT_JOBS,
            queue_capacity: DEFAULT_QUEUE_CAPACITY,
            memory_budget: None,
            node_budget: DEFAULT_NODE_BUDGET,
            ui_dir: None,
        }
    }

    /// Overrides from `KPMLCS_ARTIFACT_DIR`, `KPMLCS_MAX_JOBS`,
    /// `KPMLCS_QUEUE`, `KPMLCS_MEMORY_BUDGET`, `KPMLCS_NODE_BUDGET` and
    /// `KPMLCS_UI_DIR`. Unparsable numbers are reported, not ignored.
    pub fn with_env(mut self) -> Result<Self, String> {
        fn num<T: std::str::FromStr>(key: &str) -> Result<Option<T>, String> {
            match std::env::var(key) {
                Ok(v) => v
                    .parse()
                    .map(Some)
                    .map_err(|_| format!("{key}: not a number: {v:?}")),
                Err(_) => Ok(None),
            }
        }
        if let Ok(dir) = std::env::var("KPMLCS_ARTIFACT_DIR") {
            self.artifact_dir = dir.into();
        }
        if let Some(n) = num("KPMLCS_MAX_JOBS")? {
            self.max_concurrent_jobs = n;
        }
        if let Some(n) = num("KPMLCS_QUEUE")? {
            self.queue_capacity = n;
        }
        if let Some(n) = num("KPMLCS_MEMORY_BUDGET")? {
            self.memory_budget = Some(n);
        }
        if let Some(n) = num("KPMLCS_NODE_BUDGET")? {
            self.node_budget = n;
        }
        if let Ok(dir) = std::env::var("KPMLCS_UI_DIR") {
            self.ui_dir = Some(dir.into());
        }
        Ok(self)
    }
}
