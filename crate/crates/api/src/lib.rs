//! Read-only HTTP service over catalogs built by the `doems` CLI.
//!
//! Every layer is loaded once at startup and shared immutably between
//! requests, so a response depends only on the catalog bytes and the request.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

use doems_core::catalog::{
    class_summary, read_catalog, summarize, whatif_add_point, Catalog, ClassSummary, QueryFilter,
    DEFAULT_LAYERS,
};
use doems_core::dataset::DataSet;
use doems_core::error::Error as CoreError;
use doems_core::field::Point;

/// Service settings, fixed for the life of the process.
#[derive(Debug, Clone)]
pub struct ApiConfig {
    pub bind: SocketAddr,
    pub catalog_dir: PathBuf,
    /// (p, n) layers to serve when their files exist.
    pub layers: Vec<(u32, usize)>,
    /// Origins allowed to make cross-origin requests; `*` allows any.
    pub allowed_origins: Vec<String>,
}

impl Default for ApiConfig {
    fn default() -> Self {
        ApiConfig {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            catalog_dir: PathBuf::from("catalog"),
            layers: DEFAULT_LAYERS.to_vec(),
            allowed_origins: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::NotFound(_) => ApiError::NotFound(msg),
            CoreError::DuplicatePoint(_) => ApiError::Conflict(msg),
            CoreError::InvalidArgument(_)
            | CoreError::Parse(_)
            | CoreError::UnsupportedParameters(_)
            | CoreError::SingularSystem(_) => ApiError::BadRequest(msg),
            CoreError::CorruptStore(_) | CoreError::Inconsistency(_) | CoreError::Io(_) => {
                ApiError::Internal(msg)
            }
        }
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Json(ErrorBody {
            error: self.to_string(),
        });
        (self.status(), body).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// The loaded catalogs, keyed by (p, n).
#[derive(Debug, Default)]
pub struct AppState {
    catalogs: BTreeMap<(u32, usize), Catalog>,
}

impl AppState {
    pub fn from_catalogs(catalogs: impl IntoIterator<Item = Catalog>) -> Self {
        AppState {
            catalogs: catalogs.into_iter().map(|c| ((c.p(), c.n()), c)).collect(),
        }
    }

    /// Loads each configured layer whose file is present. Missing files are
    /// skipped; damaged ones are an error.
    pub fn load(config: &ApiConfig) -> Result<Self, CoreError> {
        let mut catalogs = Vec::new();
        for &(p, n) in &config.layers {
            match read_catalog(&config.catalog_dir, p, n) {
                Ok(c) => {
                    log::info!("serving p={p} n={n} ({} records)", c.len());
                    catalogs.push(c);
                }
                Err(CoreError::NotFound(msg)) => log::warn!("skipping layer: {msg}"),
                Err(e) => return Err(e),
            }
        }
        Ok(AppState::from_catalogs(catalogs))
    }

    fn catalog(&self, p: u32, n: usize) -> Result<&Catalog, ApiError> {
        self.catalogs
            .get(&(p, n))
            .ok_or_else(|| ApiError::NotFound(format!("no catalog for p={p}, n={n}")))
    }

    fn layer(&self, p: u32, n: usize, m: usize) -> Result<&Catalog, ApiError> {
        let c = self.catalog(p, n)?;
        if c.layers().contains(&m) {
            Ok(c)
        } else {
            Err(ApiError::NotFound(format!("no layer p={p}, n={n}, m={m}")))
        }
    }
}

/// One servable (p, n, m).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerInfo {
    pub p: u32,
    pub n: usize,
    pub m: usize,
    pub records: usize,
}

#[derive(Debug, Deserialize)]
pub struct LayerParams {
    pub p: u32,
    pub n: usize,
}

#[derive(Debug, Deserialize)]
pub struct SummaryParams {
    pub p: u32,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Deserialize)]
pub struct ClassParams {
    pub p: u32,
    pub n: usize,
    pub m: usize,
    pub contains_monomial: Option<String>,
    pub classlabel: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct WhatIfRequest {
    pub dataset: String,
    pub add_point: String,
    pub p: u32,
    pub n: usize,
}

async fn healthz() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn layers(State(state): State<Arc<AppState>>) -> Json<Vec<LayerInfo>> {
    let mut out = Vec::new();
    for c in state.catalogs.values() {
        for m in c.layers() {
            out.push(LayerInfo {
                p: c.p(),
                n: c.n(),
                m,
                records: c.layer(m).count(),
            });
        }
    }
    Json(out)
}

async fn classes(
    State(state): State<Arc<AppState>>,
    params: Result<Query<ClassParams>, QueryRejection>,
) -> ApiResult<Vec<ClassSummary>> {
    let Query(q) = params?;
    let catalog = state.layer(q.p, q.n, q.m)?;
    let filter = QueryFilter::from_text(
        q.p,
        q.n,
        Some(q.m),
        q.contains_monomial.as_deref(),
        None,
        q.classlabel.as_deref(),
        false,
    )?;
    let stats = summarize(q.p, q.n, q.m, catalog.query(&filter))?;
    Ok(Json(stats.classes))
}

async fn dataset(
    State(state): State<Arc<AppState>>,
    Path(encoding): Path<String>,
    params: Result<Query<LayerParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(q) = params?;
    let catalog = state.catalog(q.p, q.n)?;
    let s = DataSet::parse(&encoding, catalog.field(), q.n)?;
    let record = catalog.get(&s).ok_or_else(|| {
        ApiError::NotFound(format!("data set {} is not in the catalog", s.encode()))
    })?;
    Ok(Json(record).into_response())
}

async fn whatif(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: WhatIfRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::BadRequest(format!("bad request body: {e}")))?;
    let catalog = state.catalog(req.p, req.n)?;
    let field = catalog.field();
    let s = DataSet::parse(&req.dataset, field, req.n)?;
    let x = Point::parse(&req.add_point, &field, req.n)?;
    let result = whatif_add_point(catalog, &s, &x)?;
    Ok(Json(result).into_response())
}

async fn summary(
    State(state): State<Arc<AppState>>,
    params: Result<Query<SummaryParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(q) = params?;
    let catalog = state.layer(q.p, q.n, q.m)?;
    Ok(Json(class_summary(catalog, q.m)?).into_response())
}

fn cors(origins: &[String]) -> CorsLayer {
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
    };
    CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
}

/// All routes over `state`, with CORS for `allowed_origins`.
pub fn router(state: Arc<AppState>, allowed_origins: &[String]) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/v1/layers", get(layers))
        .route("/v1/classes", get(classes))
        .route("/v1/datasets/{encoding}", get(dataset))
        .route("/v1/whatif", post(whatif))
        .route("/v1/summary", get(summary))
        .layer(cors(allowed_origins))
        .with_state(state)
}

/// Loads the catalogs and serves until the process is stopped.
pub async fn serve(config: ApiConfig) -> std::io::Result<()> {
    let state = AppState::load(&config).map_err(std::io::Error::other)?;
    let app = router(Arc::new(state), &config.allowed_origins);
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app).await
}
