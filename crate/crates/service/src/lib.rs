//! HTTP interface for checking proofs and playing their conclusions.
//!
//! Sessions live in memory. Every request on a session takes that session's
//! lock, so moves to one session are applied one at a time in arrival order.
//! A session idle for longer than [`Config::ttl`] is dropped and answers 404.

mod error;
mod view;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use cl1::engine::{GameSession, IllegalMovePolicy, Move, SessionId, SessionOptions, TurnOutcome};
use cl1::iso::MatchMode;
use cl1::proof::{check_source, CheckOptions};
use cl1::syntax::Interpretation;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::{Mutex, RwLock};
use tower_http::services::ServeDir;

pub use error::ApiError;
pub use view::{NodeView, SessionView};

#[derive(Debug, Clone)]
pub struct Config {
    /// Idle time after which a session is evicted.
    pub ttl: Duration,
    /// Default atom cap for the stability test; requests may lower it.
    pub max_atoms: usize,
    /// Directory served for every path outside `/api`.
    pub static_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            ttl: Duration::from_secs(60 * 60),
            max_atoms: cl1::classical::DEFAULT_MAX_ATOMS,
            static_dir: None,
        }
    }
}

struct Entry {
    session: GameSession,
    last_used: Instant,
}

type Slot = Arc<Mutex<Entry>>;

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<SessionId, Slot>>>,
    config: Arc<Config>,
}

impl AppState {
    pub fn new(config: Config) -> AppState {
        AppState { sessions: Arc::default(), config: Arc::new(config) }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub async fn session_count(&self) -> usize {
        self.sessions.read().await.len()
    }

    /// Drop every session idle for longer than the TTL. Returns how many went.
    pub async fn evict_expired(&self) -> usize {
        let ttl = self.config.ttl;
        let mut sessions = self.sessions.write().await;
        let mut expired = Vec::new();
        for (id, slot) in sessions.iter() {
            // A locked slot is in use, hence not idle.
            if let Ok(entry) = slot.try_lock() {
                if entry.last_used.elapsed() > ttl {
                    expired.push(*id);
                }
            }
        }
        for id in &expired {
            sessions.remove(id);
        }
        expired.len()
    }

    async fn slot(&self, id: &str) -> Result<Slot, ApiError> {
        let not_found = || ApiError::not_found(format!("no session {id}"));
        let id: SessionId = id.parse().map_err(|_| not_found())?;
        let slot = self.sessions.read().await.get(&id).cloned().ok_or_else(not_found)?;
        let expired = slot.lock().await.last_used.elapsed() > self.config.ttl;
        if expired {
            self.sessions.write().await.remove(&id);
            return Err(not_found());
        }
        Ok(slot)
    }

    fn check_options(&self, mode: Option<MatchMode>, max_atoms: Option<usize>) -> CheckOptions {
        CheckOptions {
            mode: mode.unwrap_or_default(),
            max_atoms: max_atoms.map_or(self.config.max_atoms, |n| n.min(self.config.max_atoms)),
        }
    }
}

pub fn router(state: AppState) -> Router {
    let static_dir = state.config.static_dir.clone();
    let api = Router::new()
        .route("/api/check", post(check))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session).delete(delete_session))
        .route("/api/sessions/{id}/moves", post(play_move))
        .route("/api/sessions/{id}/stop", post(stop_session))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serve until the process is interrupted, sweeping idle sessions once a
/// minute.
pub async fn serve(addr: SocketAddr, config: Config) -> std::io::Result<()> {
    let state = AppState::new(config);
    let sweeper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            let n = sweeper.evict_expired().await;
            if n > 0 {
                tracing::debug!(evicted = n, "dropped idle sessions");
            }
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state)).await
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(ApiError::bad_request("empty-body", "request body is empty"));
    }
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request("bad-request", e.to_string()))
}

#[derive(Debug, Deserialize)]
struct CheckRequest {
    proof: String,
    #[serde(default)]
    mode: Option<MatchMode>,
    #[serde(default)]
    max_atoms: Option<usize>,
}

async fn check(State(state): State<AppState>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: CheckRequest = body(&bytes)?;
    let checked = check_source(&req.proof, &state.check_options(req.mode, req.max_atoms));
    Ok(Json(checked.report()).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum InterpretationInput {
    Text(String),
    Map(Interpretation),
}

#[derive(Debug, Deserialize)]
struct CreateRequest {
    proof: String,
    #[serde(default)]
    mode: Option<MatchMode>,
    #[serde(default)]
    max_atoms: Option<usize>,
    #[serde(default)]
    interpretation: Option<InterpretationInput>,
    #[serde(default)]
    illegal_move_policy: Option<IllegalMovePolicy>,
}

#[derive(Debug, Serialize)]
struct SessionResponse {
    id: String,
    state: SessionView,
}

async fn create_session(State(state): State<AppState>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = body(&bytes)?;
    let interpretation = match req.interpretation {
        None => None,
        Some(InterpretationInput::Map(m)) => Some(m),
        Some(InterpretationInput::Text(t)) => Some(
            t.parse::<Interpretation>()
                .map_err(|e| ApiError::bad_request("bad-interpretation", e.to_string()))?,
        ),
    };
    let checked = check_source(&req.proof, &state.check_options(req.mode, req.max_atoms));
    if !checked.is_valid() {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-proof", "proof does not check")
            .with_details(json!({ "diagnostics": checked.diagnostics() })));
    }
    if let (Some(interp), Some(conclusion)) = (&interpretation, checked.conclusion()) {
        if let Some(atom) = interp.missing_atom(&conclusion.formula) {
            return Err(ApiError::bad_request("bad-interpretation", format!("interpretation does not assign `{atom}`")));
        }
    }
    let options = SessionOptions { illegal_move_policy: req.illegal_move_policy.unwrap_or_default() };
    let session = GameSession::new(Arc::new(checked), interpretation, options).map_err(ApiError::from)?;
    let id = session.id();
    let view = SessionView::of(&session);
    let entry = Entry { session, last_used: Instant::now() };
    state.sessions.write().await.insert(id, Arc::new(Mutex::new(entry)));
    tracing::debug!(%id, "session created");
    Ok((StatusCode::CREATED, Json(SessionResponse { id: id.to_string(), state: view })).into_response())
}

async fn get_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let mut entry = slot.lock().await;
    entry.last_used = Instant::now();
    Ok(Json(json!({ "state": SessionView::of(&entry.session) })).into_response())
}

#[derive(Debug, Deserialize)]
struct MoveRequest {
    #[serde(rename = "move")]
    text: String,
}

async fn play_move(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    bytes: Bytes,
) -> Result<Response, ApiError> {
    let req: MoveRequest = body(&bytes)?;
    let m: Move = req.text.parse().map_err(|e: cl1::engine::MoveParseError| {
        ApiError::bad_request("bad-move", format!("`{}`: {e}", req.text))
    })?;
    let slot = state.slot(&id).await?;
    let mut entry = slot.lock().await;
    entry.last_used = Instant::now();
    let before = entry.session.run().len();
    let outcome = entry.session.apply_env_move(&m).map_err(ApiError::from)?;
    let session = &entry.session;
    let delta = &session.run()[before..];
    Ok(Json(json!({
        "state": SessionView::of(session),
        "delta": delta,
        "forfeited": outcome == TurnOutcome::Forfeited,
    }))
    .into_response())
}

async fn stop_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id).await?;
    let mut entry = slot.lock().await;
    entry.last_used = Instant::now();
    entry.session.stop();
    Ok(Json(json!({ "state": SessionView::of(&entry.session) })).into_response())
}

async fn delete_session(State(state): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let not_found = || ApiError::not_found(format!("no session {id}"));
    let key: SessionId = id.parse().map_err(|_| not_found())?;
    match state.sessions.write().await.remove(&key) {
        Some(_) => Ok(StatusCode::NO_CONTENT.into_response()),
        None => Err(not_found()),
    }
}
