//! HTTP job service over the `kpmlcs` mining library.
//!
//! Jobs are submitted as JSON, run on a bounded pool of blocking workers and
//! report progress over server-sent events. Finished jobs keep their
//! artifacts (text, GraphML, graph JSON, stats and the binary level store)
//! under `<artifact_dir>/<job_id>/`, which is rescanned on startup.
//!
//! | Method | Path | Result |
//! |---|---|---|
//! | POST | `/api/jobs` | 202 with the job record |
//! | GET | `/api/jobs` | all job records |
//! | GET | `/api/jobs/{id}` | job record |
//! | GET | `/api/jobs/{id}/events` | event stream |
//! | GET | `/api/jobs/{id}/graph?from=&to=` | graph document |
//! | GET | `/api/jobs/{id}/mlcs?k=` | top-k or full result |
//! | GET | `/api/jobs/{id}/stats` | DAG stats and sequence composition |
//! | GET | `/api/jobs/{id}/download?format=text\|graphml` | file download |
//! | GET | `/api/samples` | bundled datasets |
//! | DELETE | `/api/jobs/{id}` | cancel, or remove a finished job |
//!
//! Result endpoints answer 409 until the job is done.

pub mod api;
pub mod config;
pub mod jobs;
pub mod model;

use axum::routing::get;
use axum::Router;
use tower_http::services::ServeDir;

pub use config::ServiceConfig;
pub use jobs::JobManager;
pub use model::{EventKind, JobRecord, JobRequest, JobState, Mode, Progress, ProgressEvent};

pub fn router(jobs: JobManager) -> Router {
    let ui = jobs.config().ui_dir.clone();
    let api = Router::new()
        .route("/api/jobs", get(api::list).post(api::submit))
        .route("/api/jobs/{id}", get(api::status).delete(api::delete))
        .route("/api/jobs/{id}/events", get(api::events))
        .route("/api/jobs/{id}/graph", get(api::graph))
        .route("/api/jobs/{id}/mlcs", get(api::mlcs))
        .route("/api/jobs/{id}/stats", get(api::stats))
        .route("/api/jobs/{id}/download", get(api::download))
        .route("/api/samples", get(api::samples))
        .with_state(jobs);
    match ui {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(config: ServiceConfig, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(config, listener).await
}

pub async fn serve_on(config: ServiceConfig, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    let jobs = JobManager::start(config)?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(jobs)).await
}
