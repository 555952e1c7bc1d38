//! HTTP API for interactive boundary tuning. Sessions live in memory and
//! the least recently used one is dropped once the store is full.

use std::collections::{HashMap, VecDeque};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::json;

use chromafan::analysis::{self, Analysis, AnalysisReport, LoadedImage};
use chromafan::classifier::{mask_for, ModelOverrides};
use chromafan::{CategoryId, ColorModel, Error, PreparedModel};

pub const DEFAULT_SESSION_CAPACITY: usize = 16;
pub const MAX_UPLOAD_BYTES: usize = 64 * 1024 * 1024;

pub struct Session {
    pub name: String,
    pub image: LoadedImage,
    pub overrides: ModelOverrides,
    pub analysis: Analysis,
}

pub type SessionHandle = Arc<Mutex<Session>>;

/// Fixed-capacity map with least-recently-used eviction.
pub struct SessionStore {
    capacity: usize,
    order: VecDeque<String>,
    map: HashMap<String, SessionHandle>,
}

impl SessionStore {
    pub fn new(capacity: usize) -> Self {
        SessionStore {
            capacity: capacity.max(1),
            order: VecDeque::new(),
            map: HashMap::new(),
        }
    }

    fn touch(&mut self, id: &str) {
        if let Some(pos) = self.order.iter().position(|x| x == id) {
            let key = self.order.remove(pos).expect("position is valid");
            self.order.push_back(key);
        }
    }

    pub fn insert(&mut self, id: String, s: Session) -> SessionHandle {
        while self.map.len() >= self.capacity {
            match self.order.pop_front() {
                Some(old) => {
                    self.map.remove(&old);
                }
                None => break,
            }
        }
        let handle = Arc::new(Mutex::new(s));
        self.order.push_back(id.clone());
        self.map.insert(id, handle.clone());
        handle
    }

    pub fn get(&mut self, id: &str) -> Option<SessionHandle> {
        let h = self.map.get(id).cloned()?;
        self.touch(id);
        Some(h)
    }

    pub fn remove(&mut self, id: &str) -> bool {
        self.order.retain(|x| x != id);
        self.map.remove(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Clone)]
pub struct AppState {
    pub model: Arc<ColorModel>,
    pub prepared: Arc<PreparedModel>,
    pub model_id: Arc<str>,
    pub sessions: Arc<Mutex<SessionStore>>,
}

impl AppState {
    pub fn new(model: ColorModel, model_id: String, capacity: usize) -> anyhow::Result<Self> {
        let prepared = model.prepare()?;
        Ok(AppState {
            model: Arc::new(model),
            prepared: Arc::new(prepared),
            model_id: model_id.into(),
            sessions: Arc::new(Mutex::new(SessionStore::new(capacity))),
        })
    }

    fn session(&self, id: &str) -> Result<SessionHandle, ApiError> {
        self.sessions
            .lock()
            .expect("session store lock")
            .get(id)
            .ok_or_else(|| ApiError::not_found(format!("no session {id}")))
    }
}

pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: String) -> Self {
        ApiError {
            status,
            body: json!({ "error": error, "message": message }),
        }
    }

    fn not_found(message: String) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    fn bad_request(message: String) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidModel(v) => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({
                    "error": "invalid_model",
                    "violation": v.name(),
                    "message": v.to_string(),
                }),
            },
            Error::Image(_) | Error::EmptyInput => {
                ApiError::new(StatusCode::BAD_REQUEST, "bad_image", e.to_string())
            }
            other => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                other.to_string(),
            ),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Serialize)]
pub struct SessionReply {
    pub session_id: String,
    pub report: AnalysisReport,
    pub overrides: ModelOverrides,
    pub model: ColorModel,
    /// Pixels whose label changed relative to the previous analysis.
    pub changed_pixels: u64,
}

fn reply(id: &str, s: &Session, model: ColorModel, changed_pixels: u64) -> SessionReply {
    SessionReply {
        session_id: id.to_string(),
        report: s.analysis.report.clone(),
        overrides: s.overrides.clone(),
        model,
        changed_pixels,
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))
}

/// Accept either a multipart form with a file field or the raw image
/// bytes as the request body.
async fn read_upload(req: Request) -> Result<(String, Bytes), ApiError> {
    let is_multipart = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    if is_multipart {
        let mut form = Multipart::from_request(req, &())
            .await
            .map_err(|e| ApiError::bad_request(e.to_string()))?;
        while let Some(field) = form
            .next_field()
            .await
            .map_err(|e| ApiError::bad_request(e.to_string()))?
        {
            let name = field.file_name().unwrap_or("upload").to_string();
            let data = field
                .bytes()
                .await
                .map_err(|e| ApiError::bad_request(e.to_string()))?;
            if !data.is_empty() {
                return Ok((name, data));
            }
        }
        Err(ApiError::bad_request("multipart body has no file".into()))
    } else {
        let data = Bytes::from_request(req, &())
            .await
            .map_err(|e| ApiError::bad_request(e.to_string()))?;
        if data.is_empty() {
            return Err(ApiError::bad_request("empty body".into()));
        }
        Ok(("upload".to_string(), data))
    }
}

async fn create_session(
    State(st): State<AppState>,
    req: Request,
) -> Result<Json<SessionReply>, ApiError> {
    let (name, data) = read_upload(req).await?;
    let prepared = st.prepared.clone();
    let model_id = st.model_id.clone();
    let name2 = name.clone();
    let (image, analysis) = blocking(move || -> Result<_, Error> {
        let image = analysis::load_image_bytes(&data)?;
        let a = analysis::analyze(&image.rgb, &prepared, &name2, &model_id)?;
        Ok((image, a))
    })
    .await??;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = Session {
        name,
        image,
        overrides: ModelOverrides::default(),
        analysis,
    };
    let out = reply(&id, &session, (*st.model).clone(), 0);
    st.sessions
        .lock()
        .expect("session store lock")
        .insert(id, session);
    Ok(Json(out))
}

async fn get_session(
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionReply>, ApiError> {
    let h = st.session(&id)?;
    let s = h.lock().expect("session lock");
    let model = s.overrides.apply(&st.model).map_err(Error::from)?;
    Ok(Json(reply(&id, &s, model, 0)))
}

async fn delete_session(
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    if st.sessions.lock().expect("session store lock").remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found(format!("no session {id}")))
    }
}

/// Replace the session's overrides and re-analyze. The base model is
/// never modified.
async fn patch_model(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Json(overrides): Json<ModelOverrides>,
) -> Result<Json<SessionReply>, ApiError> {
    let h = st.session(&id)?;
    let edited = overrides.apply(&st.model).map_err(Error::from)?;
    let prepared = edited.prepare().map_err(Error::from)?;
    let model_id = st.model_id.clone();
    let out = blocking(move || -> Result<SessionReply, Error> {
        let mut s = h.lock().expect("session lock");
        let id_label = if overrides.is_empty() {
            model_id.to_string()
        } else {
            format!("{model_id}+overrides")
        };
        let a = analysis::analyze(&s.image.rgb, &prepared, &s.name, &id_label)?;
        let changed = a
            .labels
            .labels
            .iter()
            .zip(&s.analysis.labels.labels)
            .filter(|(x, y)| x != y)
            .count() as u64;
        s.analysis = a;
        s.overrides = overrides;
        Ok(reply(&id, &s, edited, changed))
    })
    .await??;
    Ok(Json(out))
}

fn png_response(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "image/png")], bytes).into_response()
}

async fn get_mask(
    State(st): State<AppState>,
    Path((id, category)): Path<(String, String)>,
) -> Result<Response, ApiError> {
    let cat: CategoryId = category
        .parse()
        .map_err(|e: chromafan::category::UnknownCategory| ApiError::not_found(e.to_string()))?;
    let h = st.session(&id)?;
    let bytes = blocking(move || {
        let s = h.lock().expect("session lock");
        let img = image::DynamicImage::ImageLuma8(mask_for(&s.analysis.labels, cat).to_image());
        analysis::png_bytes(&img)
    })
    .await??;
    Ok(png_response(bytes))
}

async fn get_composite(
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let h = st.session(&id)?;
    let bytes = blocking(move || {
        let s = h.lock().expect("session lock");
        analysis::png_bytes(&analysis::composite_image(
            &s.analysis.labels,
            s.image.alpha.as_ref(),
        ))
    })
    .await??;
    Ok(png_response(bytes))
}

async fn get_model(State(st): State<AppState>) -> Json<serde_json::Value> {
    let intervals: Vec<_> = st
        .prepared
        .intervals()
        .iter()
        .map(|iv| json!({ "category": iv.category, "lower_deg": iv.lower, "upper_deg": iv.upper, "peak_deg": iv.peak }))
        .collect();
    Json(
        json!({ "id": &*st.model_id, "sha256": st.model.hash(), "model": &*st.model, "intervals": intervals }),
    )
}

const PLACEHOLDER_INDEX: &str = "<!doctype html><title>chromafan</title>\
<p>API is under <code>/api</code>. Start with <code>--ui DIR</code> to serve the tuning UI.</p>";

pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/model", get(get_model))
        .route("/session", post(create_session))
        .route("/session/{id}", get(get_session).delete(delete_session))
        .route("/session/{id}/model", patch(patch_model))
        .route("/session/{id}/mask/{category}", get(get_mask))
        .route("/session/{id}/composite", get(get_composite))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .with_state(state);
    let app = Router::new().nest("/api", api);
    match ui_dir {
        Some(dir) => app.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => app.route(
            "/",
            get(|| async { axum::response::Html(PLACEHOLDER_INDEX) }),
        ),
    }
}

pub async fn serve(
    addr: SocketAddr,
    state: AppState,
    ui_dir: Option<PathBuf>,
) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| anyhow::anyhow!("cannot listen on {addr}: {e}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state, ui_dir)).await?;
    Ok(())
}
