//! HTTP routes, the websocket push channel and session expiry.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::rejection::JsonRejection;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tokio::sync::{broadcast, Mutex as AsyncMutex};
use tribute_agents::{AgentSettings, AGENT_NAMES};
use tribute_core::{CardSet, Seat};

use crate::api::*;
use crate::session::{HistoryEntry, Session, SessionError};

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(3600);
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(30);

struct Slot {
    session: Arc<AsyncMutex<Session>>,
    push: broadcast::Sender<String>,
    last_used: Mutex<Instant>,
}

impl Slot {
    fn touch(&self) {
        *self.last_used.lock().unwrap_or_else(|e| e.into_inner()) = Instant::now();
    }
}

/// Shared server state.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    cards: Arc<CardSet>,
    settings: Arc<AgentSettings>,
    idle_timeout: Duration,
    sessions: Mutex<HashMap<String, Arc<Slot>>>,
}

impl AppState {
    pub fn new(cards: Arc<CardSet>, settings: Arc<AgentSettings>, idle_timeout: Duration) -> Self {
        AppState { inner: Arc::new(Inner { cards, settings, idle_timeout, sessions: Mutex::new(HashMap::new()) }) }
    }

    fn sessions(&self) -> std::sync::MutexGuard<'_, HashMap<String, Arc<Slot>>> {
        self.inner.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        let slot = self.sessions().get(id).cloned().ok_or_else(|| ApiError::unknown_session(id))?;
        slot.touch();
        Ok(slot)
    }

    pub fn session_count(&self) -> usize {
        self.sessions().len()
    }

    /// Drops sessions idle for longer than the timeout. Returns how many.
    pub fn expire_idle(&self) -> usize {
        let timeout = self.inner.idle_timeout;
        let mut map = self.sessions();
        let before = map.len();
        map.retain(|_, slot| {
            let idle = slot.last_used.lock().unwrap_or_else(|e| e.into_inner()).elapsed();
            let keep = idle <= timeout;
            if !keep {
                let _ = slot.push.send(push_json(&Push::Closed { version: PROTOCOL_VERSION, reason: "expired".into() }));
            }
            keep
        });
        before - map.len()
    }

    /// Runs [`AppState::expire_idle`] periodically until the runtime stops.
    pub fn spawn_reaper(&self) -> tokio::task::JoinHandle<()> {
        let state = self.clone();
        let period = (self.inner.idle_timeout / 4).clamp(Duration::from_millis(10), Duration::from_secs(60));
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(period);
            loop {
                tick.tick().await;
                state.expire_idle();
            }
        })
    }
}

pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    legal: Option<Vec<LegalMove>>,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into(), legal: None }
    }

    fn unknown_session(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}"))
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", r.body_text())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let (status, code) = match &e {
            SessionError::UnknownAgent(_) => (StatusCode::BAD_REQUEST, "unknown_agent"),
            SessionError::Unavailable(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unavailable_patron"),
            SessionError::IllegalMove(_) | SessionError::BadIndex(_) => (StatusCode::UNPROCESSABLE_ENTITY, "illegal_move"),
            SessionError::NotHumanTurn => (StatusCode::CONFLICT, "not_human_turn"),
            SessionError::NotAgentTurn => (StatusCode::CONFLICT, "not_agent_turn"),
            SessionError::Drafting => (StatusCode::CONFLICT, "drafting"),
            SessionError::NotDrafting => (StatusCode::CONFLICT, "not_drafting"),
            SessionError::Finished => (StatusCode::CONFLICT, "finished"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            version: PROTOCOL_VERSION,
            error: ErrorDetail { code: self.code.to_string(), message: self.message, legal_moves: self.legal },
        };
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn push_json(p: &Push) -> String {
    serde_json::to_string(p).expect("push messages serialize")
}

/// The service's routes, all under `/v1`.
pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/agents", get(list_agents))
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/{id}", get(snapshot).delete(close_session))
        .route("/v1/sessions/{id}/draft", post(draft))
        .route("/v1/sessions/{id}/move", post(submit_move))
        .route("/v1/sessions/{id}/ai/step", post(ai_step))
        .route("/v1/sessions/{id}/ai/turn", post(ai_turn))
        .route("/v1/sessions/{id}/history", get(history))
        .route("/v1/sessions/{id}/logs", get(logs))
        .route("/v1/sessions/{id}/ws", get(websocket))
        .with_state(state)
}

async fn list_agents() -> Json<AgentList> {
    Json(AgentList { version: PROTOCOL_VERSION, agents: AGENT_NAMES.iter().map(|s| s.to_string()).collect() })
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Json(req) = body?;
    let seed = req.seed.unwrap_or_else(rand::random);
    let budget = req.budget_ms.map(Duration::from_millis).unwrap_or(DEFAULT_BUDGET);
    let id = uuid::Uuid::new_v4().to_string();
    let cards = state.inner.cards.clone();
    let settings = state.inner.settings.clone();
    let human: Seat = req.human_seat.into();
    let agent = req.agent.clone();
    let sid = id.clone();
    // The agent may make draft picks right away; keep that off the async workers.
    let session = tokio::task::spawn_blocking(move || Session::new(sid, cards, &settings, &agent, human, seed, budget))
        .await
        .expect("session setup does not panic")?;
    let snapshot = Snapshot::of(&session);
    let (push, _) = broadcast::channel(64);
    let slot = Slot { session: Arc::new(AsyncMutex::new(session)), push, last_used: Mutex::new(Instant::now()) };
    state.sessions().insert(id.clone(), Arc::new(slot));
    Ok((StatusCode::CREATED, Json(Created { version: PROTOCOL_VERSION, session_id: id, seed, snapshot })))
}

async fn snapshot(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Snapshot> {
    let slot = state.slot(&id)?;
    let session = slot.session.lock().await;
    Ok(Json(Snapshot::of(&session)))
}

async fn close_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let slot = state.sessions().remove(&id).ok_or_else(|| ApiError::unknown_session(&id))?;
    let _ = slot.push.send(push_json(&Push::Closed { version: PROTOCOL_VERSION, reason: "deleted".into() }));
    Ok(StatusCode::NO_CONTENT)
}

/// Runs `f` on the session on a blocking thread, with the session locked
/// for the whole call, then pushes the result to websocket listeners.
async fn command<F>(state: &AppState, id: &str, f: F) -> ApiResult<Update>
where
    F: FnOnce(&mut Session) -> Result<Vec<HistoryEntry>, ApiError> + Send + 'static,
{
    let slot = state.slot(id)?;
    let mut guard = slot.session.clone().lock_owned().await;
    let update = tokio::task::spawn_blocking(move || {
        let events = f(&mut guard)?;
        Ok::<_, ApiError>(Update { version: PROTOCOL_VERSION, snapshot: Snapshot::of(&guard), events })
    })
    .await
    .map_err(|_| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", "command panicked"))??;
    slot.touch();
    let _ = slot.push.send(push_json(&Push::Update {
        version: PROTOCOL_VERSION,
        snapshot: update.snapshot.clone(),
        events: update.events.clone(),
    }));
    Ok(Json(update))
}

async fn draft(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<DraftPick>, JsonRejection>,
) -> ApiResult<Update> {
    let Json(pick) = body?;
    command(&state, &id, move |s| Ok(s.pick_patron(pick.patron)?)).await
}

async fn submit_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SubmitMove>, JsonRejection>,
) -> ApiResult<Update> {
    let Json(req) = body?;
    command(&state, &id, move |s| {
        let mv = match (req.index, req.mv) {
            (Some(i), None) => s.legal_move(i).map_err(|e| with_legal(s, e))?,
            (None, Some(mv)) => mv,
            _ => {
                return Err(ApiError::new(StatusCode::BAD_REQUEST, "bad_request", "give exactly one of `index` and `move`"))
            }
        };
        s.submit_move(&mv).map_err(|e| with_legal(s, e))
    })
    .await
}

/// Attaches the legal move list to illegal-move errors.
fn with_legal(s: &Session, e: SessionError) -> ApiError {
    let illegal = matches!(e, SessionError::IllegalMove(_) | SessionError::BadIndex(_));
    let mut err = ApiError::from(e);
    if illegal {
        err.legal = s.state().map(|st| LegalMove::list(&st.legal_moves()));
    }
    err
}

async fn ai_step(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Update> {
    command(&state, &id, |s| Ok(s.ai_step()?)).await
}

async fn ai_turn(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Update> {
    command(&state, &id, |s| Ok(s.ai_turn()?)).await
}

async fn history(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<History> {
    let slot = state.slot(&id)?;
    let s = slot.session.lock().await;
    Ok(Json(History {
        version: PROTOCOL_VERSION,
        seed: s.seed,
        picks: s.picks().to_vec(),
        moves: s.moves().to_vec(),
        events: s.history().to_vec(),
    }))
}

async fn logs(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Logs> {
    let slot = state.slot(&id)?;
    let lines = slot.session.lock().await.agent_log();
    Ok(Json(Logs { version: PROTOCOL_VERSION, text: lines.join("\n"), lines }))
}

async fn websocket(State(state): State<AppState>, Path(id): Path<String>, ws: WebSocketUpgrade) -> Result<Response, ApiError> {
    let slot = state.slot(&id)?;
    Ok(ws.on_upgrade(move |socket| stream_updates(socket, slot)))
}

async fn stream_updates(mut socket: WebSocket, slot: Arc<Slot>) {
    let mut rx = slot.push.subscribe();
    let first = {
        let s = slot.session.lock().await;
        push_json(&Push::Snapshot { version: PROTOCOL_VERSION, snapshot: Snapshot::of(&s) })
    };
    if socket.send(Message::Text(first.into())).await.is_err() {
        return;
    }
    loop {
        tokio::select! {
            msg = rx.recv() => match msg {
                Ok(text) => {
                    let closing = text.contains("\"type\":\"closed\"");
                    if socket.send(Message::Text(text.into())).await.is_err() || closing {
                        return;
                    }
                }
                Err(broadcast::error::RecvError::Lagged(_)) => {
                    let s = slot.session.lock().await;
                    let text = push_json(&Push::Snapshot { version: PROTOCOL_VERSION, snapshot: Snapshot::of(&s) });
                    drop(s);
                    if socket.send(Message::Text(text.into())).await.is_err() {
                        return;
                    }
                }
                Err(broadcast::error::RecvError::Closed) => return,
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => return,
                Some(Ok(_)) => {}
            },
        }
    }
}
