use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, put};
use axum::Router;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

use super::{ProjectService, ReportRequest, ServiceError};
use crate::ingest::Violation;
use crate::project::ErrorAnnotation;
use crate::report::{ReportError, ReportFormat};
use crate::scoring::CountingSide;

/// Request header carrying the revision a mutation was based on.
pub const REVISION_HEADER: &str = "expected-revision";

type Shared = Arc<ProjectService>;

pub fn router(service: Shared) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/projects", get(list_projects))
        .route("/projects/{id}/units", get(list_units))
        .route(
            "/projects/{id}/units/{uid}/engines/{eid}/annotations",
            put(put_annotations),
        )
        .route("/projects/{id}/report", get(get_report))
        .with_state(service)
}

pub async fn serve(service: Shared, listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(service)).await
}

fn json<T: Serialize>(status: StatusCode, value: &T) -> Response {
    let mut body = serde_json::to_string_pretty(value).expect("serializable body");
    body.push('\n');
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    current_revision: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violations: Option<&'a [Violation]>,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Conflict { .. } => StatusCode::CONFLICT,
            ServiceError::Validation(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Report(ReportError::Unreviewed { .. }) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Report(_) => StatusCode::BAD_REQUEST,
            ServiceError::Storage(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        if status == StatusCode::INTERNAL_SERVER_ERROR {
            tracing::error!("{self}");
        }
        let body = ErrorBody {
            error: self.to_string(),
            current_revision: match &self {
                ServiceError::Conflict { current, .. } => Some(*current),
                _ => None,
            },
            violations: match &self {
                ServiceError::Validation(v) => Some(v),
                _ => None,
            },
        };
        json(status, &body)
    }
}

async fn healthz() -> &'static str {
    "ok\n"
}

async fn list_projects(State(service): State<Shared>) -> Response {
    json(StatusCode::OK, &service.list_projects())
}

#[derive(Debug, Deserialize)]
struct UnitsQuery {
    cursor: Option<String>,
    page_size: Option<String>,
}

async fn list_units(
    State(service): State<Shared>,
    Path(id): Path<String>,
    Query(q): Query<UnitsQuery>,
) -> Result<Response, ServiceError> {
    let page_size = match q.page_size.as_deref().filter(|s| !s.is_empty()) {
        None => None,
        Some(s) => Some(
            s.parse::<usize>()
                .map_err(|_| ServiceError::BadRequest(format!("bad page_size {s:?}")))?,
        ),
    };
    let page = service.list_units(&id, q.cursor.as_deref(), page_size)?;
    Ok(json(StatusCode::OK, &page))
}

async fn put_annotations(
    State(service): State<Shared>,
    Path((id, uid, eid)): Path<(String, String, String)>,
    headers: HeaderMap,
    body: String,
) -> Result<Response, ServiceError> {
    let expected = headers
        .get(REVISION_HEADER)
        .ok_or_else(|| ServiceError::BadRequest(format!("missing {REVISION_HEADER} header")))?
        .to_str()
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .ok_or_else(|| ServiceError::BadRequest(format!("{REVISION_HEADER} must be an integer")))?;
    let annotations: Vec<ErrorAnnotation> =
        serde_json::from_str(&body).map_err(|e| ServiceError::BadRequest(format!("annotations body: {e}")))?;
    let outcome = tokio::task::spawn_blocking(move || service.put_annotations(&id, &uid, &eid, annotations, expected))
        .await
        .expect("put task panicked")?;
    Ok(json(StatusCode::OK, &outcome))
}

#[derive(Debug, Deserialize)]
struct ReportQuery {
    engines: Option<String>,
    side: Option<String>,
    format: Option<String>,
    allow_partial: Option<bool>,
}

async fn get_report(
    State(service): State<Shared>,
    Path(id): Path<String>,
    Query(q): Query<ReportQuery>,
) -> Result<Response, ServiceError> {
    let bad = |e: &dyn std::fmt::Display| ServiceError::BadRequest(e.to_string());
    let request = ReportRequest {
        engines: q
            .engines
            .as_deref()
            .map(|s| s.split(',').filter(|e| !e.is_empty()).map(str::to_string).collect())
            .unwrap_or_default(),
        side: match q.side.as_deref().filter(|s| !s.is_empty()) {
            None => CountingSide::Source,
            Some(s) => s.parse().map_err(|e| bad(&e))?,
        },
        format: match q.format.as_deref().filter(|s| !s.is_empty()) {
            None => ReportFormat::Machine,
            Some(s) => s.parse().map_err(|e| bad(&e))?,
        },
        allow_partial: q.allow_partial.unwrap_or(false),
    };
    let body = service.report(&id, &request)?;
    Ok((
        StatusCode::OK,
        [(header::CONTENT_TYPE, request.format.content_type())],
        body,
    )
        .into_response())
}
