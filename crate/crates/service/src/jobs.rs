//! Job lifecycle: queueing, bounded concurrency, progress fan-out, artifacts
//! on disk and recovery after a restart.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::Instant;

use kpmlcs::pipeline::{mine_with, MiningEvent, MiningMode, SpillConfig};
use kpmlcs::{
    common_patterns, enumerate_all, export_graph_json, export_graphml, export_stats_json, export_text,
    topk, DagStats, KeyPointDag, LayerStore, MemoryBudget, MineError, MlcsResult, PatternSegment,
    ProblemInstance,
};
use tokio::sync::{broadcast, mpsc, Semaphore};

use crate::config::ServiceConfig;
use crate::model::{EventKind, JobParams, JobRecord, JobRequest, JobState, Progress, ProgressEvent};

pub const TEXT_FILE: &str = "mlcs.text";
pub const GRAPHML_FILE: &str = "graph.xml";
pub const GRAPH_JSON_FILE: &str = "graph.json";
pub const STATS_FILE: &str = "stats.json";
const RECORD_FILE: &str = "record.json";
const REQUEST_FILE: &str = "request.json";
const EVENT_CAPACITY: usize = 1024;

#[derive(Debug, thiserror::Error)]
pub enum SubmitError {
    #[error("{0}")]
    Invalid(String),
    #[error("job queue is full ({0} waiting); retry later")]
    QueueFull(usize),
    #[error("could not store job: {0}")]
    Io(#[from] io::Error),
}

/// Everything a finished job serves.
#[derive(Debug)]
pub struct JobOutput {
    pub dag: KeyPointDag,
    pub stats: DagStats,
    pub result: MlcsResult,
    pub patterns: Vec<PatternSegment>,
    pub text: String,
    pub graphml: String,
}

struct Shared {
    record: JobRecord,
    started: Option<Instant>,
}

pub struct Job {
    pub id: String,
    pub instance: ProblemInstance,
    dir: PathBuf,
    shared: Mutex<Shared>,
    events: broadcast::Sender<ProgressEvent>,
    cancel: AtomicBool,
    output: Mutex<Option<Arc<JobOutput>>>,
}

impl Job {
    fn new(id: String, instance: ProblemInstance, dir: PathBuf, record: JobRecord) -> Self {
        Self {
            id,
            instance,
            dir,
            shared: Mutex::new(Shared {
                record,
                started: None,
            }),
            events: broadcast::channel(EVENT_CAPACITY).0,
            cancel: AtomicBool::new(false),
            output: Mutex::new(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn record(&self) -> JobRecord {
        self.shared.lock().unwrap().record.clone()
    }

    pub fn params(&self) -> JobParams {
        self.shared.lock().unwrap().record.params.clone()
    }

    /// Latest snapshot plus a receiver for everything after it, taken
    /// atomically so no event falls in between.
    pub fn subscribe(&self) -> (JobRecord, broadcast::Receiver<ProgressEvent>) {
        let shared = self.shared.lock().unwrap();
        (shared.record.clone(), self.events.subscribe())
    }

    /// Applies `f` to the record and publishes the event it returns.
    fn update(&self, f: impl FnOnce(&mut JobRecord, u64) -> Option<ProgressEvent>) {
        let mut shared = self.shared.lock().unwrap();
        let elapsed = shared.started.map_or(0, |t| t.elapsed().as_millis() as u64);
        shared.record.progress.elapsed_ms = elapsed;
        if let Some(event) = f(&mut shared.record, elapsed) {
            // No receivers is fine.
            let _ = self.events.send(event);
        }
    }

    fn finish(&self, state: JobState, error: Option<String>) {
        let kind = match state {
            JobState::Done => EventKind::Done,
            JobState::Canceled => EventKind::Canceled,
            _ => EventKind::Failed,
        };
        self.update(|r, _| {
            r.state = state;
            r.error = error.clone();
            let mut ev = ProgressEvent::new(kind, &r.progress);
            ev.error = error;
            Some(ev)
        });
        if let Err(e) = write_json(&self.dir.join(RECORD_FILE), &self.record()) {
            tracing::warn!(job = %self.id, "could not persist record: {e}");
        }
    }

    /// Finished output, loading it back from disk after a restart.
    pub fn output(&self) -> Option<Arc<JobOutput>> {
        let mut slot = self.output.lock().unwrap();
        if slot.is_none() && self.record().state == JobState::Done {
            match load_output(&self.dir, &self.params()) {
                Ok(out) => *slot = Some(Arc::new(out)),
                Err(e) => tracing::warn!(job = %self.id, "artifacts unreadable: {e}"),
            }
        }
        slot.clone()
    }
}

struct Inner {
    config: ServiceConfig,
    jobs: RwLock<BTreeMap<String, Arc<Job>>>,
    queue: mpsc::Sender<Arc<Job>>,
}

/// In-process job store. Cheap to clone.
#[derive(Clone)]
pub struct JobManager {
    inner: Arc<Inner>,
}

impl JobManager {
    /// Recovers earlier jobs from the artifact directory and starts the
    /// dispatcher. Must be called inside a Tokio runtime.
    pub fn start(config: ServiceConfig) -> io::Result<Self> {
        fs::create_dir_all(&config.artifact_dir)?;
        let (tx, rx) = mpsc::channel(config.queue_capacity.max(1));
        let jobs = recover(&config.artifact_dir);
        let inner = Arc::new(Inner {
            jobs: RwLock::new(jobs),
            queue: tx,
            config,
        });
        tokio::spawn(dispatch(rx, Arc::new(Semaphore::new(inner.config.max_concurrent_jobs.max(1)))));
        Ok(Self { inner })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.inner.config
    }

    pub fn get(&self, id: &str) -> Option<Arc<Job>> {
        self.inner.jobs.read().unwrap().get(id).cloned()
    }

    pub fn list(&self) -> Vec<JobRecord> {
        self.inner.jobs.read().unwrap().values().map(|j| j.record()).collect()
    }

    pub fn submit(&self, request: JobRequest) -> Result<JobRecord, SubmitError> {
        let cfg = &self.inner.config;
        let instance = request.instance().map_err(SubmitError::Invalid)?;
        let params = request
            .params(cfg.node_budget, cfg.memory_budget)
            .map_err(SubmitError::Invalid)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let dir = cfg.artifact_dir.join(&id);
        let record = JobRecord {
            job_id: id.clone(),
            params,
            state: JobState::Queued,
            progress: Progress::default(),
            artifacts: Vec::new(),
            expansion: None,
            error: None,
        };
        let job = Arc::new(Job::new(id.clone(), instance, dir.clone(), record.clone()));
        fs::create_dir_all(&dir)?;
        write_json(&dir.join(REQUEST_FILE), &request)?;
        write_json(&dir.join(RECORD_FILE), &record)?;
        self.inner.jobs.write().unwrap().insert(id.clone(), job.clone());
        if let Err(e) = self.inner.queue.try_send(job) {
            self.inner.jobs.write().unwrap().remove(&id);
            let _ = fs::remove_dir_all(&dir);
            return Err(match e {
                mpsc::error::TrySendError::Full(_) => SubmitError::QueueFull(cfg.queue_capacity),
                mpsc::error::TrySendError::Closed(_) => {
                    SubmitError::Io(io::Error::other("dispatcher stopped"))
                }
            });
        }
        Ok(record)
    }

    /// Cancels an active job, or forgets a finished one and deletes its files.
    /// Returns the record as it stands afterwards, or `None` if it was removed.
    pub fn delete(&self, id: &str) -> Option<Option<JobRecord>> {
        let job = self.get(id)?;
        let state = job.record().state;
        if state.is_terminal() {
            self.inner.jobs.write().unwrap().remove(id);
            if let Err(e) = fs::remove_dir_all(job.dir()) {
                tracing::warn!(job = %id, "could not remove artifacts: {e}");
            }
            return Some(None);
        }
        job.cancel.store(true, Ordering::SeqCst);
        if state == JobState::Queued {
            job.finish(JobState::Canceled, None);
        }
        Some(Some(job.record()))
    }
}

async fn dispatch(mut rx: mpsc::Receiver<Arc<Job>>, slots: Arc<Semaphore>) {
    while let Some(job) = rx.recv().await {
        let Ok(permit) = slots.clone().acquire_owned().await else {
            return;
        };
        tokio::task::spawn_blocking(move || {
            run_job(&job);
            drop(permit);
        });
    }
}

fn run_job(job: &Job) {
    {
        let mut shared = job.shared.lock().unwrap();
        if shared.record.state != JobState::Queued {
            return;
        }
        shared.record.state = JobState::Running;
        shared.started = Some(Instant::now());
        let _ = job
            .events
            .send(ProgressEvent::new(EventKind::Progress, &shared.record.progress));
    }
    let params = job.params();
    let mut mine = params.mine_params();
    mine.spill = Some(SpillConfig {
        budget: params.memory_budget.map(MemoryBudget::new),
        store_dir: job.dir.clone(),
        job_id: job.id.clone(),
        persist_all: true,
    });

    let outcome = mine_with(&job.instance, &mine, |event| {
        if job.cancel.load(Ordering::SeqCst) {
            return ControlFlow::Break(());
        }
        job.update(|r, _| match *event {
            MiningEvent::Wave(w) => {
                let p = &mut r.progress;
                p.wave = p.wave.max(w.wave);
                p.nodes = p.nodes.max(w.nodes);
                p.edges = p.edges.max(w.edges);
                Some(ProgressEvent::new(EventKind::Progress, p))
            }
            MiningEvent::Spill {
                action,
                spilled_levels,
            } => {
                r.progress.spilled_levels = spilled_levels;
                let mut ev = ProgressEvent::new(EventKind::Spill, &r.progress);
                ev.level = Some(action.level);
                ev.bytes = Some(action.bytes);
                Some(ev)
            }
        });
        ControlFlow::Continue(())
    });

    match outcome {
        Ok(out) => {
            let text = export_text(&out.result, &out.stats, job.instance.d());
            let graphml = export_graphml(&out.dag);
            let written = write_artifacts(&job.dir, &out.dag, &out.result, &out.patterns, &out.stats, &text, &graphml);
            match written {
                Ok(files) => {
                    *job.output.lock().unwrap() = Some(Arc::new(JobOutput {
                        dag: out.dag,
                        stats: out.stats,
                        result: out.result,
                        patterns: out.patterns,
                        text,
                        graphml,
                    }));
                    job.update(|r, _| {
                        r.artifacts = files;
                        r.expansion = Some(out.expansion);
                        None
                    });
                    job.finish(JobState::Done, None);
                }
                Err(e) => job.finish(JobState::Failed, Some(format!("writing artifacts: {e}"))),
            }
        }
        Err(MineError::Canceled) => job.finish(JobState::Canceled, None),
        Err(e) => job.finish(JobState::Failed, Some(e.to_string())),
    }
}

fn write_artifacts(
    dir: &Path,
    dag: &KeyPointDag,
    result: &MlcsResult,
    patterns: &[PatternSegment],
    stats: &DagStats,
    text: &str,
    graphml: &str,
) -> io::Result<Vec<String>> {
    let doc = export_graph_json(dag, result, patterns, stats, None).map_err(io::Error::other)?;
    let files = [
        (TEXT_FILE, text.to_string()),
        (GRAPHML_FILE, graphml.to_string()),
        (GRAPH_JSON_FILE, doc.to_json()),
        (STATS_FILE, export_stats_json(stats)),
    ];
    for (name, body) in &files {
        fs::write(dir.join(name), body)?;
    }
    let mut names: Vec<String> = files.iter().map(|(n, _)| n.to_string()).collect();
    names.push(kpmlcs::persistence::MANIFEST_FILE.to_string());
    Ok(names)
}

fn load_output(dir: &Path, params: &JobParams) -> Result<JobOutput, String> {
    let store = LayerStore::open(dir).map_err(|e| e.to_string())?;
    let dag = store.load_dag().map_err(|e| e.to_string())?;
    let stats_raw = fs::read_to_string(dir.join(STATS_FILE)).map_err(|e| e.to_string())?;
    let stats: DagStats = serde_json::from_str(&stats_raw).map_err(|e| e.to_string())?;
    let result = match params.mining_mode() {
        MiningMode::Exact { cap } => enumerate_all(&dag, cap),
        MiningMode::TopK { k } => topk(&dag, k).map_err(|e| e.to_string())?,
    };
    let patterns = common_patterns(&dag);
    let text = fs::read_to_string(dir.join(TEXT_FILE)).map_err(|e| e.to_string())?;
    let graphml = fs::read_to_string(dir.join(GRAPHML_FILE)).map_err(|e| e.to_string())?;
    Ok(JobOutput {
        dag,
        stats,
        result,
        patterns,
        text,
        graphml,
    })
}

/// Rebuilds the job table from `<artifact_dir>/<job_id>/record.json`. Jobs
/// that were still queued or running are marked failed.
fn recover(root: &Path) -> BTreeMap<String, Arc<Job>> {
    let mut jobs = BTreeMap::new();
    let Ok(entries) = fs::read_dir(root) else {
        return jobs;
    };
    for entry in entries.flatten() {
        let dir = entry.path();
        let record: Option<JobRecord> = fs::read_to_string(dir.join(RECORD_FILE))
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok());
        let request: Option<JobRequest> = fs::read_to_string(dir.join(REQUEST_FILE))
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok());
        let (Some(mut record), Some(request)) = (record, request) else {
            continue;
        };
        let Ok(instance) = request.instance() else {
            continue;
        };
        let interrupted = !record.state.is_terminal();
        if interrupted {
            record.state = JobState::Failed;
            record.error = Some("interrupted by service restart".into());
            let _ = write_json(&dir.join(RECORD_FILE), &record);
        }
        let id = record.job_id.clone();
        jobs.insert(id.clone(), Arc::new(Job::new(id, instance, dir, record)));
    }
    jobs
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let body = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, body)?;
    fs::rename(tmp, path)
}

/// Output and record of a job, or the reason results are not available.
pub fn finished(job: &Job) -> Result<Arc<JobOutput>, JobState> {
    let state = job.record().state;
    if state != JobState::Done {
        return Err(state);
    }
    job.output().ok_or(JobState::Failed)
}
