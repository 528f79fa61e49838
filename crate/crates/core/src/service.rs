//! Local HTTP service returning result documents.
//!
//! `GET` or `POST` on `/api/offset`, `/api/envelope`, `/api/singular` and `/api/contour`. The
//! scenario comes from the query string (`curve=cayley&a=1&b=1&d=0.5&side=both`) or from a JSON
//! body in the scenario format; query keys override body fields. An optional `resolution` hint
//! sets the sample count, clamped to `[64, 8192]`.
//!
//! Responses carry an `ETag` derived from the normalized scenario, so repeated requests can be
//! answered with `304 Not Modified`. Requests whose estimated cost exceeds the configured
//! threshold get `202 Accepted` and a job id to poll at `/api/job/{id}`.

use std::collections::HashMap;
use std::net::{Ipv4Addr, SocketAddr};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::header::{self, HeaderMap, HeaderValue};
use axum::http::{Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::request::{Operation, ScenarioFlags};
use crate::scenario::{
    run_scenario_with, CurveSpec, Diagnostics, OutputFormat, RadiusSpec, RunError, Scenario, ScenarioError,
    ScenarioParseError,
};
use crate::svg::{emit_svg, SvgStyle};

pub const DEFAULT_PORT: u16 = 7878;
pub const MIN_RESOLUTION: usize = 64;
pub const MAX_RESOLUTION: usize = 8192;

/// Rough per-unit run times in seconds, used to decide between answering inline and queueing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub per_offset_sample: f64,
    pub per_singular_sample: f64,
    pub per_envelope_sample: f64,
    pub per_contour_cell_term: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            per_offset_sample: 2e-7,
            per_singular_sample: 1.5e-6,
            per_envelope_sample: 2e-7,
            per_contour_cell_term: 1e-8,
        }
    }
}

impl CostModel {
    /// Estimated run time of `s` in seconds.
    pub fn estimate(&self, s: &Scenario) -> f64 {
        let strands = match s.curve {
            CurveSpec::Cayley { .. } => 2.0,
            _ => 1.0,
        };
        let sides = s.sides.expand().len() as f64;
        let n = s.samples as f64;
        let layers = s.d.len() as f64;
        let mut cost = 0.0;
        if s.offsets {
            cost += layers * strands * sides * n * self.per_offset_sample;
        }
        if s.singular {
            cost += layers * strands * sides * n * self.per_singular_sample;
        }
        if let Some(r) = s.envelope {
            let runs = if r == RadiusSpec::OffsetDistance { layers } else { 1.0 };
            cost += runs * strands * n * self.per_envelope_sample;
        }
        if let Some(c) = s.contour {
            let terms = match s.curve {
                CurveSpec::Cayley { .. } => 15.0,
                _ => 4.0,
            };
            cost += (c.cells as f64 + 1.0).powi(2) * terms * self.per_contour_cell_term;
        }
        cost
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub port: u16,
    /// Origins allowed by CORS; the local explorer UI.
    pub ui_origins: Vec<String>,
    /// Estimated cost in seconds above which a request becomes a polled job.
    pub async_threshold: f64,
    pub cost: CostModel,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            port: DEFAULT_PORT,
            ui_origins: vec!["http://localhost:5173".into(), "http://127.0.0.1:5173".into()],
            async_threshold: 1.0,
            cost: CostModel::default(),
        }
    }
}

impl ServiceConfig {
    /// Defaults, overridden by `OVALKIT_PORT` and `OVALKIT_UI_ORIGIN` (comma-separated).
    pub fn from_env() -> Result<Self, String> {
        let mut c = ServiceConfig::default();
        if let Ok(p) = std::env::var("OVALKIT_PORT") {
            c.port = p.parse().map_err(|e| format!("OVALKIT_PORT=`{p}`: {e}"))?;
        }
        if let Ok(o) = std::env::var("OVALKIT_UI_ORIGIN") {
            c.ui_origins = o.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        }
        Ok(c)
    }
}

/// A finished computation, as sent to the client.
#[derive(Debug, Clone)]
struct Rendered {
    status: StatusCode,
    content_type: &'static str,
    body: Bytes,
}

impl IntoResponse for Rendered {
    fn into_response(self) -> Response {
        (self.status, [(header::CONTENT_TYPE, self.content_type)], self.body).into_response()
    }
}

#[derive(Debug, Clone)]
enum Job {
    Running,
    Done(Rendered),
}

#[derive(Clone)]
pub struct AppState {
    config: Arc<ServiceConfig>,
    jobs: Arc<Mutex<HashMap<String, Job>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        AppState { config: Arc::new(config), jobs: Arc::default() }
    }
}

#[derive(Debug)]
pub enum ApiError {
    Malformed(String),
    Invalid(ScenarioError),
    Numerical { message: String, diagnostics: Diagnostics },
    Cancelled,
    UnknownJob(String),
}

impl From<ScenarioParseError> for ApiError {
    fn from(e: ScenarioParseError) -> Self {
        match e {
            ScenarioParseError::Syntax(m) => ApiError::Malformed(m),
            ScenarioParseError::Invalid(e) => ApiError::Invalid(e),
        }
    }
}

impl From<ScenarioError> for ApiError {
    fn from(e: ScenarioError) -> Self {
        ApiError::Invalid(e)
    }
}

impl From<RunError> for ApiError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Invalid(e) => ApiError::Invalid(e),
            RunError::Numerical { message, diagnostics } => ApiError::Numerical { message, diagnostics },
            RunError::Cancelled => ApiError::Cancelled,
        }
    }
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::Malformed(_) => StatusCode::BAD_REQUEST,
            ApiError::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Numerical { .. } => StatusCode::INTERNAL_SERVER_ERROR,
            ApiError::Cancelled => StatusCode::SERVICE_UNAVAILABLE,
            ApiError::UnknownJob(_) => StatusCode::NOT_FOUND,
        }
    }

    fn body(&self) -> Value {
        match self {
            ApiError::Malformed(m) => json!({ "error": "malformed", "message": m }),
            ApiError::Invalid(e) => json!({ "error": "invalid", "path": e.path, "message": e.message }),
            ApiError::Numerical { message, diagnostics } => {
                json!({ "error": "numerical", "message": message, "diagnostics": diagnostics })
            }
            ApiError::Cancelled => json!({ "error": "cancelled" }),
            ApiError::UnknownJob(id) => json!({ "error": "unknown_job", "job": id }),
        }
    }

    fn render(&self) -> Rendered {
        Rendered { status: self.status(), content_type: "application/json", body: json_bytes(&self.body()) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        self.render().into_response()
    }
}

fn json_bytes<T: Serialize>(v: &T) -> Bytes {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    Bytes::from(s)
}

/// Sample count from a resolution hint.
pub fn clamp_resolution(hint: usize) -> usize {
    hint.clamp(MIN_RESOLUTION, MAX_RESOLUTION)
}

/// Turn a query string and body into the scenario for `op`.
pub fn parse_request(op: Operation, query: &[(String, String)], body: &[u8]) -> Result<Scenario, ApiError> {
    let mut resolution: Option<usize> = None;
    let mut pairs = Vec::new();
    for (k, v) in query {
        if k == "resolution" {
            let r = v.parse().map_err(|e| ScenarioError::new("resolution", format!("`{v}`: {e}")))?;
            resolution = Some(r);
        } else {
            pairs.push((k.as_str(), v.as_str()));
        }
    }
    let flags = ScenarioFlags::from_pairs(pairs)?;

    let body = std::str::from_utf8(body).map_err(|e| ApiError::Malformed(format!("body is not UTF-8: {e}")))?;
    let base = if body.trim().is_empty() {
        None
    } else {
        let mut value: Value = serde_json::from_str(body).map_err(|e| ApiError::Malformed(e.to_string()))?;
        let Some(obj) = value.as_object_mut() else {
            return Err(ScenarioError::new("", "request body must be a JSON object").into());
        };
        if let Some(r) = obj.remove("resolution") {
            let r = r.as_u64().ok_or_else(|| ScenarioError::new("resolution", "must be a non-negative integer"))?;
            resolution = resolution.or(Some(r as usize));
        }
        Some(Scenario::from_value(value)?)
    };
    let mut s = flags.build(op, base)?;
    if let Some(r) = resolution {
        s.samples = clamp_resolution(r);
        s.validate()?;
    }
    Ok(s)
}

/// Hex SHA-256 of the normalized scenario; used as ETag and job id.
pub fn scenario_hash(s: &Scenario) -> String {
    let digest = Sha256::digest(s.to_json().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Run `s` and encode the result the way the CLI writes it.
fn compute(s: &Scenario, cancel: &AtomicBool) -> Rendered {
    match run_scenario_with(s, Some(cancel)) {
        Ok(doc) => match s.format {
            OutputFormat::Json => {
                Rendered { status: StatusCode::OK, content_type: "application/json", body: Bytes::from(doc.to_json()) }
            }
            OutputFormat::Svg => Rendered {
                status: StatusCode::OK,
                content_type: "image/svg+xml",
                body: Bytes::from(emit_svg(&doc, &SvgStyle::default())),
            },
        },
        Err(e) => ApiError::from(e).render(),
    }
}

struct CancelOnDrop(Arc<AtomicBool>);

impl Drop for CancelOnDrop {
    fn drop(&mut self) {
        self.0.store(true, Ordering::Relaxed);
    }
}

fn etag_matches(headers: &HeaderMap, etag: &str) -> bool {
    headers.get_all(header::IF_NONE_MATCH).iter().filter_map(|v| v.to_str().ok()).flat_map(|v| v.split(',')).any(|t| {
        let t = t.trim();
        t == "*" || t == etag || t.strip_prefix("W/") == Some(etag)
    })
}

fn with_etag(mut r: Response, etag: &str) -> Response {
    if let Ok(v) = HeaderValue::from_str(etag) {
        r.headers_mut().insert(header::ETAG, v);
    }
    r
}

fn job_accepted(id: &str) -> Response {
    let body = json!({ "job": id, "status": "running", "poll": format!("/api/job/{id}") });
    let mut r = (StatusCode::ACCEPTED, [(header::CONTENT_TYPE, "application/json")], json_bytes(&body)).into_response();
    if let Ok(v) = HeaderValue::from_str(&format!("/api/job/{id}")) {
        r.headers_mut().insert(header::LOCATION, v);
    }
    r
}

async fn handle(
    op: Operation,
    state: AppState,
    headers: HeaderMap,
    query: Result<Query<Vec<(String, String)>>, axum::extract::rejection::QueryRejection>,
    body: Bytes,
) -> Response {
    let query = match query {
        Ok(Query(q)) => q,
        Err(e) => return ApiError::Malformed(e.body_text()).into_response(),
    };
    let scenario = match parse_request(op, &query, &body) {
        Ok(s) => s,
        Err(e) => return e.into_response(),
    };
    let id = scenario_hash(&scenario);
    let etag = format!("\"{id}\"");
    if etag_matches(&headers, &etag) {
        return with_etag(StatusCode::NOT_MODIFIED.into_response(), &etag);
    }

    if state.config.cost.estimate(&scenario) > state.config.async_threshold {
        let start = {
            let mut jobs = state.jobs.lock().expect("job table");
            match jobs.get(&id) {
                Some(Job::Done(r)) => return with_etag(r.clone().into_response(), &etag),
                Some(Job::Running) => false,
                None => {
                    jobs.insert(id.clone(), Job::Running);
                    true
                }
            }
        };
        if start {
            let jobs = state.jobs.clone();
            let job_id = id.clone();
            tokio::task::spawn_blocking(move || {
                let r = compute(&scenario, &AtomicBool::new(false));
                jobs.lock().expect("job table").insert(job_id, Job::Done(r));
            });
        }
        return job_accepted(&id);
    }

    let flag = Arc::new(AtomicBool::new(false));
    let _guard = CancelOnDrop(flag.clone());
    let task = tokio::task::spawn_blocking(move || compute(&scenario, &flag));
    match task.await {
        Ok(r) => with_etag(r.into_response(), &etag),
        Err(e) => ApiError::Numerical { message: format!("worker failed: {e}"), diagnostics: Diagnostics::default() }
            .into_response(),
    }
}

async fn job_status(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let job = state.jobs.lock().expect("job table").get(&id).cloned();
    match job {
        Some(Job::Running) => job_accepted(&id),
        Some(Job::Done(r)) => with_etag(r.into_response(), &format!("\"{id}\"")),
        None => ApiError::UnknownJob(id).into_response(),
    }
}

async fn health() -> impl IntoResponse {
    axum::Json(json!({ "status": "ok", "engine": crate::scenario::EngineInfo::default() }))
}

/// The service routes, with CORS for the configured UI origins.
pub fn router(config: ServiceConfig) -> Router {
    let origins: Vec<HeaderValue> = config.ui_origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()).collect();
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::list(origins))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE, header::IF_NONE_MATCH])
        .expose_headers([header::ETAG, header::LOCATION]);
    let state = AppState::new(config);
    let mut app = Router::new();
    for op in Operation::ALL {
        let h = move |State(st): State<AppState>, headers: HeaderMap, q, body: Bytes| handle(op, st, headers, q, body);
        app = app.route(&format!("/api/{}", op.as_str()), get(h).post(h));
    }
    app.route("/api/job/{id}", get(job_status)).route("/api/health", get(health)).layer(cors).with_state(state)
}

/// Serve on `127.0.0.1:{port}` until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
