use std::collections::BTreeMap;
use std::convert::Infallible;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::Json;
use futures::stream::{self, Stream, StreamExt};
use kpmlcs::export::TopkEntry;
use kpmlcs::samples::{bundled, PUBLIC_DATA_NOTE};
use kpmlcs::sequence::{char_composition, Composition};
use kpmlcs::{export_graph_json, topk, DagStats, InputFormat};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::broadcast::error::RecvError;

use crate::jobs::{finished, Job, JobManager, SubmitError};
use crate::model::{EventKind, JobRecord, JobRequest, JobState, ProgressEvent};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    reason: String,
}

impl ApiError {
    fn new(status: StatusCode, reason: impl Into<String>) -> Self {
        Self {
            status,
            reason: reason.into(),
        }
    }

    fn bad_request(reason: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, reason)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.reason }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn job(jobs: &JobManager, id: &str) -> ApiResult<Arc<Job>> {
    jobs.get(id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no job {id}")))
}

fn done(job: &Job) -> ApiResult<Arc<crate::jobs::JobOutput>> {
    finished(job).map_err(|state| match state {
        JobState::Done => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "artifacts unreadable"),
        other => ApiError::new(
            StatusCode::CONFLICT,
            format!("job is {}, results are available once it is done", state_name(other)),
        ),
    })
}

fn state_name(s: JobState) -> &'static str {
    match s {
        JobState::Queued => "queued",
        JobState::Running => "running",
        JobState::Done => "done",
        JobState::Failed => "failed",
        JobState::Canceled => "canceled",
    }
}

pub async fn submit(
    State(jobs): State<JobManager>,
    body: Result<Json<JobRequest>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<(StatusCode, Json<JobRecord>)> {
    let Json(request) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    match jobs.submit(request) {
        Ok(record) => Ok((StatusCode::ACCEPTED, Json(record))),
        Err(SubmitError::Invalid(reason)) => Err(ApiError::bad_request(reason)),
        Err(e @ SubmitError::QueueFull(_)) => Err(ApiError::new(StatusCode::SERVICE_UNAVAILABLE, e.to_string())),
        Err(e) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())),
    }
}

pub async fn list(State(jobs): State<JobManager>) -> Json<Vec<JobRecord>> {
    Json(jobs.list())
}

pub async fn status(State(jobs): State<JobManager>, Path(id): Path<String>) -> ApiResult<Json<JobRecord>> {
    Ok(Json(job(&jobs, &id)?.record()))
}

pub async fn delete(State(jobs): State<JobManager>, Path(id): Path<String>) -> ApiResult<Response> {
    match jobs.delete(&id) {
        None => Err(ApiError::new(StatusCode::NOT_FOUND, format!("no job {id}"))),
        Some(None) => Ok(StatusCode::NO_CONTENT.into_response()),
        Some(Some(record)) => Ok((StatusCode::ACCEPTED, Json(record)).into_response()),
    }
}

fn sse_event(ev: &ProgressEvent) -> Result<Event, Infallible> {
    let name = match ev.kind {
        EventKind::Progress => "progress",
        EventKind::Spill => "spill",
        EventKind::Done => "done",
        EventKind::Failed => "failed",
        EventKind::Canceled => "canceled",
    };
    Ok(Event::default()
        .event(name)
        .data(serde_json::to_string(ev).expect("event serializes")))
}

/// Server-sent events: a snapshot of the current progress, then live events
/// until the job ends. A finished job replays its snapshot and final event.
pub async fn events(
    State(jobs): State<JobManager>,
    Path(id): Path<String>,
) -> ApiResult<Sse<impl Stream<Item = Result<Event, Infallible>>>> {
    let job = job(&jobs, &id)?;
    let (record, rx) = job.subscribe();
    let mut first = vec![ProgressEvent::new(EventKind::Progress, &record.progress)];
    let terminal = match record.state {
        JobState::Done => Some(EventKind::Done),
        JobState::Failed => Some(EventKind::Failed),
        JobState::Canceled => Some(EventKind::Canceled),
        _ => None,
    };
    if let Some(kind) = terminal {
        let mut ev = ProgressEvent::new(kind, &record.progress);
        ev.error = record.error.clone();
        first.push(ev);
    }
    let live = stream::unfold((rx, terminal.is_some()), |(mut rx, finished)| async move {
        if finished {
            return None;
        }
        loop {
            match rx.recv().await {
                Ok(ev) => {
                    let end = ev.is_terminal();
                    return Some((ev, (rx, end)));
                }
                Err(RecvError::Lagged(_)) => continue,
                Err(RecvError::Closed) => return None,
            }
        }
    });
    let events = stream::iter(first).chain(live).map(|ev| sse_event(&ev));
    Ok(Sse::new(events).keep_alive(KeepAlive::default()))
}

#[derive(Debug, Deserialize)]
pub struct RangeQuery {
    from: Option<u32>,
    to: Option<u32>,
}

pub async fn graph(
    State(jobs): State<JobManager>,
    Path(id): Path<String>,
    Query(q): Query<RangeQuery>,
) -> ApiResult<Response> {
    let job = job(&jobs, &id)?;
    let out = done(&job)?;
    let range = match (q.from, q.to) {
        (None, None) => None,
        (Some(f), Some(t)) => Some((f, t)),
        _ => return Err(ApiError::bad_request("give both from and to, or neither")),
    };
    let doc = export_graph_json(&out.dag, &out.result, &out.patterns, &out.stats, range)
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], doc.to_json()).into_response())
}

#[derive(Debug, Deserialize)]
pub struct KQuery {
    k: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct MlcsPayload {
    #[serde(rename = "L")]
    pub mlcs_len: u32,
    pub k: Option<usize>,
    pub total_path_count: String,
    pub truncated: bool,
    pub paths: Vec<TopkEntry>,
    pub distinct_strings: Vec<String>,
}

pub async fn mlcs(
    State(jobs): State<JobManager>,
    Path(id): Path<String>,
    Query(q): Query<KQuery>,
) -> ApiResult<Json<MlcsPayload>> {
    let job = job(&jobs, &id)?;
    let out = done(&job)?;
    let result = match q.k {
        Some(0) => return Err(ApiError::bad_request("k must be at least 1")),
        Some(k) => topk(&out.dag, k).map_err(|e| ApiError::bad_request(e.to_string()))?,
        None => out.result.clone(),
    };
    Ok(Json(MlcsPayload {
        mlcs_len: result.mlcs_len,
        k: result.requested_k,
        total_path_count: result.total_path_count.to_string(),
        truncated: result.truncated,
        paths: TopkEntry::from_result(&result),
        distinct_strings: result.distinct_strings,
    }))
}

#[derive(Debug, Serialize)]
pub struct SequenceStats {
    pub name: String,
    pub length: usize,
    pub composition: BTreeMap<char, Composition>,
}

#[derive(Debug, Serialize)]
pub struct StatsPayload {
    pub stats: DagStats,
    pub lengths: Vec<usize>,
    pub sequences: Vec<SequenceStats>,
}

pub async fn stats(State(jobs): State<JobManager>, Path(id): Path<String>) -> ApiResult<Json<StatsPayload>> {
    let job = job(&jobs, &id)?;
    let out = done(&job)?;
    let inst = &job.instance;
    let sequences = inst
        .sequences()
        .iter()
        .map(|s| SequenceStats {
            name: s.name.clone(),
            length: s.len(),
            composition: char_composition(inst.alphabet(), s).into_iter().collect(),
        })
        .collect();
    Ok(Json(StatsPayload {
        stats: out.stats.clone(),
        lengths: inst.lengths(),
        sequences,
    }))
}

#[derive(Debug, Deserialize)]
pub struct FormatQuery {
    format: Option<String>,
}

pub async fn download(
    State(jobs): State<JobManager>,
    Path(id): Path<String>,
    Query(q): Query<FormatQuery>,
) -> ApiResult<Response> {
    let job = job(&jobs, &id)?;
    let format = q.format.as_deref().unwrap_or("text");
    let (ext, media) = match format {
        "text" => ("text", "text/plain; charset=utf-8"),
        "graphml" => ("xml", "application/xml"),
        other => return Err(ApiError::bad_request(format!("unknown format {other:?}; use text or graphml"))),
    };
    let out = done(&job)?;
    let body = if ext == "text" {
        out.text.clone()
    } else {
        out.graphml.clone()
    };
    let disposition = format!("attachment; filename=\"{}.{ext}\"", job.id);
    Ok((
        [
            (header::CONTENT_TYPE, media.to_string()),
            (header::CONTENT_DISPOSITION, disposition),
        ],
        body,
    )
        .into_response())
}

#[derive(Debug, Serialize)]
struct SampleInfo {
    name: &'static str,
    description: &'static str,
    format: InputFormat,
    d: usize,
    lengths: Vec<usize>,
    content: String,
}

pub async fn samples() -> Response {
    let list: Vec<SampleInfo> = bundled()
        .into_iter()
        .map(|s| {
            let inst = s.instance();
            SampleInfo {
                name: s.name,
                description: s.description,
                format: s.format,
                d: inst.d(),
                lengths: inst.lengths(),
                content: s.content,
            }
        })
        .collect();
    Json(json!({ "samples": list, "public_data": PUBLIC_DATA_NOTE })).into_response()
}
