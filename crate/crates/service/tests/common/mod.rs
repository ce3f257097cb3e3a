#![allow(dead_code)]

use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, Response, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use kpmlcs_service::{router, JobManager, ServiceConfig};
use serde_json::{json, Value};
use tempfile::TempDir;
use tower::ServiceExt;

pub struct TestApp {
    pub dir: TempDir,
    pub router: Router,
    config: ServiceConfig,
}

impl TestApp {
    pub fn new() -> Self {
        Self::with(|_| {})
    }

    pub fn with(tweak: impl FnOnce(&mut ServiceConfig)) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ServiceConfig::new(dir.path());
        tweak(&mut config);
        let router = router(JobManager::start(config.clone()).unwrap());
        Self { dir, router, config }
    }

    /// A fresh manager over the same artifact directory.
    pub fn restart(&self) -> Router {
        router(JobManager::start(self.config.clone()).unwrap())
    }
}

async fn send(app: &Router, req: Request<Body>) -> Response<Body> {
    app.clone().oneshot(req).await.unwrap()
}

pub async fn get(app: &Router, uri: &str) -> Response<Body> {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

pub async fn delete(app: &Router, uri: &str) -> Response<Body> {
    let req = Request::builder().method(Method::DELETE).uri(uri).body(Body::empty()).unwrap();
    send(app, req).await
}

pub async fn submit(app: &Router, body: Value) -> (StatusCode, Value) {
    let req = Request::post("/api/jobs")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = send(app, req).await;
    let status = resp.status();
    (status, body_json(resp).await)
}

pub async fn body_text(resp: Response<Body>) -> String {
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    String::from_utf8(bytes.to_vec()).unwrap()
}

pub async fn body_json(resp: Response<Body>) -> Value {
    serde_json::from_str(&body_text(resp).await).unwrap()
}

/// Polls the job record until it reaches a terminal state.
pub async fn wait_done(app: &Router, id: &str) -> Value {
    for _ in 0..6000 {
        let rec = body_json(get(app, &format!("/api/jobs/{id}")).await).await;
        if matches!(rec["state"].as_str(), Some("done" | "failed" | "canceled")) {
            return rec;
        }
        tokio::time::sleep(Duration::from_millis(20)).await;
    }
    panic!("job {id} did not finish");
}

/// Reads the whole event stream of a job; it closes after the final event.
pub async fn read_events(app: &Router, id: &str) -> Vec<Value> {
    let resp = get(app, &format!("/api/jobs/{id}/events")).await;
    assert_eq!(resp.status(), StatusCode::OK);
    let body = tokio::time::timeout(Duration::from_secs(120), body_text(resp))
        .await
        .expect("event stream ended");
    body.lines()
        .filter_map(|l| l.strip_prefix("data:"))
        .map(|d| serde_json::from_str(d.trim()).unwrap())
        .collect()
}

/// Unrelated long sequences mined without pruning; runs for a long time.
pub fn slow_request() -> Value {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let seqs: Vec<String> = (0..4)
        .map(|_| {
            (0..1500)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    b"ACGT"[(state >> 60) as usize % 4] as char
                })
                .collect()
        })
        .collect();
    json!({"sequences": seqs, "prune": "off"})
}
