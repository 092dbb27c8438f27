//! Loopback HTTP service behind the interactive control-point editor.
//!
//! One session per process holds the loaded panorama and a cache of
//! projection tables. Previews carry a client generation number; once a
//! newer generation has been seen, older renders stop at the next row and
//! answer `410 Gone`.
//!
//! * `PUT /panorama` with PNG or JPEG bytes
//! * `GET /preview?controls=l1,b1,..,l4,b4&size=N&mode=M&kernel=K&sampling=S&gen=G` returns `image/png`
//! * `GET /equator?controls=..&samples=N&kernel=K` returns `[[lon, lat], ..]`, with the
//!   warped dateline and prime meridian in the `x-dateline` and `x-prime-meridian` headers

use std::collections::HashMap;
use std::net::SocketAddr;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, PoisonError, RwLock};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Query, State};
use axum::http::{header, HeaderName, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, put};
use axum::{Json, Router};
use quincunx_core::projection::ProjectionTable;
use quincunx_core::raster::{
    build_table, decode_image, encode_png, render_with_table, EquirectImage, RasterError,
    RenderMode, RenderOptions, Sampling, TableKey,
};
use quincunx_core::warp::{warp, ControlError, ControlPoints, InterpKernel};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

pub const DEFAULT_PREVIEW_SIZE: usize = 256;
pub const MAX_PREVIEW_SIZE: usize = 4096;
/// Neighbouring control longitudes closer than this are rejected.
pub const MIN_CONTROL_SEPARATION: f64 = 0.5;
pub const DEFAULT_EQUATOR_SAMPLES: usize = 360;
pub const MAX_EQUATOR_SAMPLES: usize = 100_000;
const MAX_UPLOAD_BYTES: usize = 512 * 1024 * 1024;

pub const GENERATION_HEADER: HeaderName = HeaderName::from_static("x-generation");
pub const DATELINE_HEADER: HeaderName = HeaderName::from_static("x-dateline");
pub const PRIME_MERIDIAN_HEADER: HeaderName = HeaderName::from_static("x-prime-meridian");

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("refusing to listen on {0}: the preview service is loopback only")]
    NotLoopback(SocketAddr),
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Error answered to a client, rendered as `{"error": "..."}`.
#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("{0}")]
    BadRequest(String),
    #[error(transparent)]
    Controls(#[from] ControlError),
    #[error("{0}")]
    Unprocessable(String),
    #[error("no panorama loaded; PUT one to /panorama first")]
    NoPanorama,
    #[error("generation {generation} was superseded by generation {latest}")]
    Superseded { generation: u64, latest: u64 },
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            Self::BadRequest(_) => StatusCode::BAD_REQUEST,
            Self::Controls(_) | Self::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Self::NoPanorama => StatusCode::CONFLICT,
            Self::Superseded { .. } => StatusCode::GONE,
            Self::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.to_string() });
        (self.status(), Json(body)).into_response()
    }
}

#[derive(Debug, Default)]
pub struct Session {
    panorama: RwLock<Option<Arc<EquirectImage>>>,
    tables: Mutex<HashMap<TableKey, Arc<ProjectionTable>>>,
    table_builds: AtomicU64,
    generation: AtomicU64,
    render_lock: tokio::sync::Mutex<()>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces the panorama. Cached tables stay valid since they never
    /// depend on the image.
    pub fn set_panorama(&self, img: EquirectImage) {
        *self
            .panorama
            .write()
            .unwrap_or_else(PoisonError::into_inner) = Some(Arc::new(img));
    }

    pub fn panorama(&self) -> Option<Arc<EquirectImage>> {
        self.panorama
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .clone()
    }

    /// Number of projection tables built so far.
    pub fn table_builds(&self) -> u64 {
        self.table_builds.load(Ordering::SeqCst)
    }

    /// Highest generation seen.
    pub fn latest_generation(&self) -> u64 {
        self.generation.load(Ordering::SeqCst)
    }

    /// Registers a request. Requests without a generation get a fresh one,
    /// newer than everything seen so far.
    fn claim(&self, generation: Option<u64>) -> u64 {
        match generation {
            Some(g) => {
                self.generation.fetch_max(g, Ordering::SeqCst);
                g
            }
            None => self.generation.fetch_add(1, Ordering::SeqCst) + 1,
        }
    }

    fn check_current(&self, generation: u64) -> Result<(), ApiError> {
        let latest = self.latest_generation();
        if latest > generation {
            return Err(ApiError::Superseded { generation, latest });
        }
        Ok(())
    }

    fn table(&self, opts: &RenderOptions) -> Result<Arc<ProjectionTable>, RasterError> {
        let mut tables = self.tables.lock().unwrap_or_else(PoisonError::into_inner);
        if let Some(t) = tables.get(&opts.table_key()) {
            return Ok(t.clone());
        }
        let table = Arc::new(build_table(opts)?);
        self.table_builds.fetch_add(1, Ordering::SeqCst);
        tables.insert(opts.table_key(), table.clone());
        Ok(table)
    }
}

pub fn router(session: Arc<Session>) -> Router {
    Router::new()
        .route("/panorama", put(put_panorama))
        .route("/preview", get(get_preview))
        .route("/equator", get(get_equator))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .with_state(session)
}

/// Binds a loopback listener.
pub async fn bind(addr: SocketAddr) -> Result<TcpListener, ServiceError> {
    if !addr.ip().is_loopback() {
        return Err(ServiceError::NotLoopback(addr));
    }
    TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })
}

pub async fn serve(listener: TcpListener, session: Arc<Session>) -> Result<(), ServiceError> {
    axum::serve(listener, router(session)).await?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PanoramaInfo {
    pub width: u32,
    pub height: u32,
    pub channels: u8,
}

async fn put_panorama(
    State(session): State<Arc<Session>>,
    body: Bytes,
) -> Result<Json<PanoramaInfo>, ApiError> {
    if body.is_empty() {
        return Err(ApiError::BadRequest(
            "empty body; send PNG or JPEG bytes".into(),
        ));
    }
    let img = tokio::task::spawn_blocking(move || decode_image(&body))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map_err(|e| ApiError::Unprocessable(e.to_string()))?;
    let info = PanoramaInfo {
        width: img.width(),
        height: img.height(),
        channels: img.channels(),
    };
    session.set_panorama(img);
    Ok(Json(info))
}

#[derive(Debug, Default, Deserialize)]
struct PreviewParams {
    controls: Option<String>,
    size: Option<String>,
    mode: Option<String>,
    kernel: Option<String>,
    sampling: Option<String>,
    #[serde(rename = "gen")]
    generation: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct EquatorParams {
    controls: Option<String>,
    samples: Option<String>,
    kernel: Option<String>,
}

fn parse_param<T: FromStr>(value: Option<&str>, default: T, name: &str) -> Result<T, ApiError>
where
    T::Err: std::fmt::Display,
{
    match value {
        None | Some("") => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|e| ApiError::BadRequest(format!("invalid {name} {v:?}: {e}"))),
    }
}

fn parse_controls(value: Option<&str>) -> Result<ControlPoints, ApiError> {
    let cp = match value {
        None | Some("") => ControlPoints::identity(),
        Some(v) => ControlPoints::parse(v)?,
    };
    cp.require_separation(MIN_CONTROL_SEPARATION)?;
    Ok(cp)
}

async fn get_preview(
    State(session): State<Arc<Session>>,
    Query(params): Query<PreviewParams>,
) -> Result<Response, ApiError> {
    let controls = parse_controls(params.controls.as_deref())?;
    let size: usize = parse_param(params.size.as_deref(), DEFAULT_PREVIEW_SIZE, "size")?;
    if !(2..=MAX_PREVIEW_SIZE).contains(&size) {
        return Err(ApiError::Unprocessable(format!(
            "preview size must lie in [2, {MAX_PREVIEW_SIZE}], got {size}"
        )));
    }
    let opts = RenderOptions {
        size,
        mode: parse_param(params.mode.as_deref(), RenderMode::Pq, "mode")?,
        kernel: parse_param(params.kernel.as_deref(), InterpKernel::Linear, "kernel")?,
        sampling: parse_param(params.sampling.as_deref(), Sampling::Nearest, "sampling")?,
        // odd sizes have no pixel-centre lattice symmetry
        fast: size.is_multiple_of(2),
        ..RenderOptions::default()
    };
    opts.validate()
        .map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let generation = params
        .generation
        .as_deref()
        .map(|g| parse_param(Some(g), 0u64, "gen"))
        .transpose()?;
    let image = session.panorama().ok_or(ApiError::NoPanorama)?;

    let generation = session.claim(generation);
    let _turn = session.render_lock.lock().await;
    session.check_current(generation)?;

    let worker = session.clone();
    let png = tokio::task::spawn_blocking(move || -> Result<Vec<u8>, ApiError> {
        let table = worker
            .table(&opts)
            .map_err(|e| ApiError::Internal(e.to_string()))?;
        let cancel = || worker.latest_generation() > generation;
        let out =
            render_with_table(&image, &table, &controls, &opts, &cancel).map_err(|e| match e {
                RasterError::Cancelled => ApiError::Superseded {
                    generation,
                    latest: worker.latest_generation(),
                },
                other => ApiError::Internal(other.to_string()),
            })?;
        encode_png(&out).map_err(|e| ApiError::Internal(e.to_string()))
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))??;
    session.check_current(generation)?;

    Ok((
        [
            (header::CONTENT_TYPE, "image/png".to_string()),
            (GENERATION_HEADER, generation.to_string()),
        ],
        png,
    )
        .into_response())
}

async fn get_equator(Query(params): Query<EquatorParams>) -> Result<Response, ApiError> {
    let controls = parse_controls(params.controls.as_deref())?;
    let kernel = parse_param(params.kernel.as_deref(), InterpKernel::Linear, "kernel")?;
    let samples: usize = parse_param(
        params.samples.as_deref(),
        DEFAULT_EQUATOR_SAMPLES,
        "samples",
    )?;
    if !(4..=MAX_EQUATOR_SAMPLES).contains(&samples) {
        return Err(ApiError::Unprocessable(format!(
            "samples must lie in [4, {MAX_EQUATOR_SAMPLES}], got {samples}"
        )));
    }
    let points: Vec<[f64; 2]> = (0..samples)
        .map(|k| {
            let lon = -180.0 + 360.0 * k as f64 / samples as f64;
            let w = warp(0.0, lon, &controls, kernel);
            [w.lon, w.lat]
        })
        .collect();
    let dateline = warp(0.0, -180.0, &controls, kernel).lon;
    let prime = warp(0.0, 0.0, &controls, kernel).lon;
    Ok((
        [
            (DATELINE_HEADER, dateline.to_string()),
            (PRIME_MERIDIAN_HEADER, prime.to_string()),
        ],
        Json(points),
    )
        .into_response())
}
