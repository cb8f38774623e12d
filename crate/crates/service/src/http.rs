//! JSON API over an [`AnnotationSession`]. Every API response is an
//! envelope: `{"ok": true, "data": ...}` or `{"ok": false, "error": "..."}`.

use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::body::Body;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use forge_core::eval::AnnotatorLabel;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::ServiceError;
use crate::session::AnnotationSession;

pub const ADDR_ENV: &str = "FORGE_ADDR";
pub const MEDIA_ROOT_ENV: &str = "FORGE_MEDIA_ROOT";
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

const FALLBACK_INDEX: &str = include_str!("../static/index.html");

#[derive(Clone)]
pub struct AppState {
    pub session: Arc<Mutex<AnnotationSession>>,
    pub media_root: Option<PathBuf>,
    /// Directory holding the browser bundle; `index.html` is served at `/`.
    pub ui_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(session: AnnotationSession) -> Self {
        AppState {
            session: Arc::new(Mutex::new(session)),
            media_root: None,
            ui_dir: None,
        }
    }

    fn session(&self) -> std::sync::MutexGuard<'_, AnnotationSession> {
        // a panic mid-request can not leave the log half-applied
        self.session.lock().unwrap_or_else(|e| e.into_inner())
    }
}

pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        let status = match &e {
            ServiceError::UnknownAnnotator(_) | ServiceError::UnknownPair(_) => StatusCode::NOT_FOUND,
            ServiceError::InvalidLabel(_) | ServiceError::Malformed { .. } | ServiceError::Config(_) => {
                StatusCode::BAD_REQUEST
            }
            ServiceError::Io { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"ok": false, "error": self.message}))).into_response()
    }
}

fn ok<T: Serialize>(data: T) -> Response {
    Json(json!({"ok": true, "data": data})).into_response()
}

type ApiResult = Result<Response, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/pairs/next", get(next_pair))
        .route("/api/labels", post(submit_label))
        .route("/api/progress", get(progress))
        .route("/api/agreement", get(agreement))
        .route("/api/export", get(export))
        .route("/api/classes", get(classes))
        .route("/media/{*path}", get(media))
        .route("/", get(index))
        .fallback(ui_asset)
        .with_state(state)
}

#[derive(Deserialize)]
struct NextQuery {
    annotator: Option<String>,
}

async fn next_pair(State(state): State<AppState>, Query(q): Query<NextQuery>) -> ApiResult {
    let annotator = q
        .annotator
        .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, "missing query parameter: annotator"))?;
    Ok(ok(state.session().next_pair(&annotator)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelBody {
    pair_id: String,
    annotator: String,
    label: String,
}

async fn submit_label(
    State(state): State<AppState>,
    body: Result<Json<LabelBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult {
    let Json(body) = body.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    Ok(ok(state.session().submit(&body.annotator, &body.pair_id, &body.label)?))
}

async fn progress(State(state): State<AppState>) -> Response {
    ok(state.session().progress())
}

async fn agreement(State(state): State<AppState>) -> Response {
    ok(state.session().agreement_snapshot())
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

/// `?format=jsonl` downloads the export file itself.
async fn export(State(state): State<AppState>, Query(q): Query<ExportQuery>) -> ApiResult {
    let export = state.session().export();
    match q.format.as_deref() {
        None | Some("json") => Ok(ok(export)),
        Some("jsonl") => Ok((
            [
                (header::CONTENT_TYPE, "application/x-ndjson"),
                (header::CONTENT_DISPOSITION, "attachment; filename=\"labels.export.jsonl\""),
            ],
            export.to_jsonl(),
        )
            .into_response()),
        Some(other) => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("unknown export format {other:?}; expected json or jsonl"),
        )),
    }
}

#[derive(Serialize)]
struct ClassOption {
    key: String,
    label: &'static str,
}

/// Answer options with their keyboard keys: 1-8 in canonical order, 0 for Unsure.
async fn classes() -> Response {
    let options: Vec<ClassOption> = AnnotatorLabel::options()
        .map(|o| ClassOption {
            key: match o {
                AnnotatorLabel::Class(c) => (c.index() + 1).to_string(),
                AnnotatorLabel::Unsure => "0".into(),
            },
            label: o.name(),
        })
        .collect();
    ok(options)
}

/// Joins `rel` onto `root`, refusing anything but plain path segments.
pub fn safe_join(root: &Path, rel: &str) -> Option<PathBuf> {
    let rel = Path::new(rel);
    if rel
        .components()
        .any(|c| !matches!(c, Component::Normal(_)))
    {
        return None;
    }
    let joined = root.join(rel);
    // symlinks must not lead outside the root either
    let canonical_root = root.canonicalize().ok()?;
    let canonical = joined.canonicalize().ok()?;
    canonical.starts_with(&canonical_root).then_some(canonical)
}

fn content_type(path: &Path) -> &'static str {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("jpg" | "jpeg") => "image/jpeg",
        Some("png") => "image/png",
        Some("gif") => "image/gif",
        Some("webp") => "image/webp",
        Some("svg") => "image/svg+xml",
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => "application/json",
        Some("txt") => "text/plain; charset=utf-8",
        _ => "application/octet-stream",
    }
}

async fn serve_file(root: &Path, rel: &str) -> ApiResult {
    let path = safe_join(root, rel)
        .filter(|p| p.is_file())
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("not found: {rel}")))?;
    let bytes = tokio::fs::read(&path)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, content_type(&path))], Body::from(bytes)).into_response())
}

async fn media(State(state): State<AppState>, UrlPath(path): UrlPath<String>) -> ApiResult {
    let root = state
        .media_root
        .as_deref()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "no media root configured"))?;
    serve_file(root, &path).await
}

async fn index(State(state): State<AppState>) -> ApiResult {
    match &state.ui_dir {
        Some(dir) if dir.join("index.html").is_file() => serve_file(dir, "index.html").await,
        _ => Ok(([(header::CONTENT_TYPE, "text/html; charset=utf-8")], FALLBACK_INDEX).into_response()),
    }
}

async fn ui_asset(State(state): State<AppState>, uri: axum::http::Uri) -> ApiResult {
    let rel = uri.path().trim_start_matches('/');
    match &state.ui_dir {
        Some(dir) if !rel.starts_with("api/") => serve_file(dir, rel).await,
        _ => Err(ApiError::new(StatusCode::NOT_FOUND, format!("no route for {}", uri.path()))),
    }
}

/// Serves until ctrl-c.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
