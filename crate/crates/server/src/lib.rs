//! HTTP/JSON service for playing against the equilibrium bot.
//!
//! Sessions live in memory and expire after an idle period. Each session is
//! behind its own lock, so requests to one session are serialized while
//! different sessions proceed independently. Value tables are shared
//! read-only.

pub mod wire;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gops::dp::{strategy_for, value_of};
use gops::play::{BotPolicy, Session};
use gops::{Card, CardSet, Error, FloatTable, GameState};
use serde::de::DeserializeOwned;

use wire::{ApiRound, ApiSession, BidRequest, BidResponse, CardProb, CreateSession, ErrorBody, Mixture, ValueResponse};

pub const DEFAULT_IDLE: Duration = Duration::from_secs(3600);
const MAX_N: usize = 13;

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, format!("no session {id}"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::CardNotInHand(_) | Error::CardOutOfRange { .. } | Error::SessionFinished => StatusCode::CONFLICT,
            Error::MissingTable(_) | Error::LayerMissing { .. } | Error::TableSizeMismatch { .. } => {
                StatusCode::SERVICE_UNAVAILABLE
            }
            Error::UnequalSizes { .. } | Error::BadCardList(_) | Error::UpcardNotInDeck(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.message })).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Live {
    session: Session,
    hints: bool,
    touched: Instant,
}

struct Inner {
    tables: Vec<Arc<FloatTable>>,
    sessions: Mutex<HashMap<String, Arc<Mutex<Live>>>>,
    idle: Duration,
}

/// Shared server state; cheap to clone.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

impl AppState {
    /// Serve the given tables. Sessions need a complete table for their deck
    /// size; value and strategy queries may use partial ones.
    pub fn new(tables: Vec<FloatTable>) -> Self {
        let mut tables: Vec<Arc<FloatTable>> = tables.into_iter().map(Arc::new).collect();
        tables.sort_by_key(|t| t.n());
        AppState {
            inner: Arc::new(Inner { tables, sessions: Mutex::new(HashMap::new()), idle: DEFAULT_IDLE }),
        }
    }

    pub fn with_idle_timeout(self, idle: Duration) -> Self {
        let inner = Arc::try_unwrap(self.inner).unwrap_or_else(|_| panic!("set the idle timeout before sharing"));
        AppState { inner: Arc::new(Inner { idle, ..inner }) }
    }

    /// Register an existing session and return its id.
    pub fn insert_session(&self, session: Session, hints: bool) -> String {
        let id = session.id().to_string();
        let live = Live { session, hints, touched: Instant::now() };
        self.inner.sessions.lock().unwrap().insert(id.clone(), Arc::new(Mutex::new(live)));
        id
    }

    pub fn session_count(&self) -> usize {
        self.inner.sessions.lock().unwrap().len()
    }

    /// Drop sessions idle for longer than the timeout; returns how many.
    pub fn sweep_expired(&self) -> usize {
        let idle = self.inner.idle;
        let mut sessions = self.inner.sessions.lock().unwrap();
        let before = sessions.len();
        // a session locked by an in-flight request is in use, not idle
        sessions.retain(|_, live| live.try_lock().map_or(true, |l| l.touched.elapsed() <= idle));
        before - sessions.len()
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<Live>>> {
        self.sweep_expired();
        self.inner.sessions.lock().unwrap().get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn table_for_session(&self, n: usize) -> ApiResult<Arc<FloatTable>> {
        self.inner
            .tables
            .iter()
            .find(|t| t.n() == n && t.is_complete())
            .cloned()
            .ok_or_else(|| ApiError::from(Error::MissingTable(n)))
    }

    /// First table (smallest deck first) that can answer `query`.
    fn with_table<T>(&self, state: &GameState, query: impl Fn(&FloatTable) -> gops::Result<T>) -> ApiResult<T> {
        let mut last = None;
        for t in self.inner.tables.iter().filter(|t| t.n() >= state.max_value() as usize) {
            match query(t) {
                Ok(v) => return Ok(v),
                Err(e) => last = Some(e),
            }
        }
        Err(last.map_or_else(|| ApiError::from(Error::MissingTable(state.max_value() as usize)), ApiError::from))
    }

    fn mixture(&self, state: &GameState, upcard: Card) -> ApiResult<Mixture> {
        let sol = self.with_table(state, |t| strategy_for(t, state, upcard))?;
        let probs = state
            .v()
            .iter()
            .zip(sol.row.to_f64())
            .map(|(c, p)| CardProb { card: c.value(), p })
            .collect();
        Ok(Mixture { probs, value: sol.value })
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/v1/sessions", post(create_session))
        .route("/api/v1/sessions/{id}", get(get_session))
        .route("/api/v1/sessions/{id}/bid", post(submit_bid))
        .route("/api/v1/sessions/{id}/advice", get(advice))
        .route("/api/v1/value", get(value))
        .route("/api/v1/strategy", get(strategy))
        .with_state(state)
}

/// Bind and serve until the process exits, sweeping idle sessions each minute.
pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let sweeper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.sweep_expired();
        }
    });
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

fn fresh_seed() -> u64 {
    let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64);
    nanos ^ uuid::Uuid::new_v4().as_u64_pair().0
}

async fn create_session(State(app): State<AppState>, body: Bytes) -> ApiResult<(StatusCode, Json<ApiSession>)> {
    let req: CreateSession = parse_body(&body)?;
    if req.n == 0 || req.n > MAX_N {
        return Err(ApiError::bad_request(format!("n must be in 1..={MAX_N}, got {}", req.n)));
    }
    let table = app.table_for_session(req.n)?;
    let mut session = Session::new(req.n, req.seed.unwrap_or_else(fresh_seed), BotPolicy::Equilibrium(table))?;
    session.set_id(uuid::Uuid::new_v4().simple().to_string());
    let view = ApiSession::project(&session, req.hints);
    app.insert_session(session, req.hints);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<ApiSession>> {
    let slot = app.session(&id)?;
    let mut live = slot.lock().unwrap();
    live.touched = Instant::now();
    Ok(Json(ApiSession::project(&live.session, live.hints)))
}

async fn submit_bid(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<BidResponse>> {
    let slot = app.session(&id)?;
    let req: BidRequest = parse_body(&body)?;
    let mut live = slot.lock().unwrap();
    live.touched = Instant::now();
    if live.session.is_finished() {
        return Err(Error::SessionFinished.into());
    }
    let card = Card::new(req.card, live.session.n())?;
    let record = live.session.submit_bid(card)?;
    Ok(Json(BidResponse {
        round_record: ApiRound::from(&record),
        session: ApiSession::project(&live.session, live.hints),
    }))
}

async fn advice(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Mixture>> {
    let slot = app.session(&id)?;
    let (state, upcard) = {
        let mut live = slot.lock().unwrap();
        live.touched = Instant::now();
        if !live.hints {
            return Err(ApiError::new(StatusCode::FORBIDDEN, "hints are disabled for this session"));
        }
        let upcard = live.session.upcard().ok_or_else(|| ApiError::from(Error::SessionFinished))?;
        (live.session.state(), upcard)
    };
    Ok(Json(app.mixture(&state, upcard)?))
}

fn parse_state(q: &HashMap<String, String>) -> ApiResult<GameState> {
    let field = |name: &str| -> ApiResult<CardSet> {
        let text = q.get(name).ok_or_else(|| ApiError::bad_request(format!("missing query parameter {name}")))?;
        CardSet::parse(text, MAX_N).map_err(|e| ApiError::bad_request(e.to_string()))
    };
    Ok(GameState::new(field("v")?, field("y")?, field("p")?)?)
}

async fn value(State(app): State<AppState>, Query(q): Query<HashMap<String, String>>) -> ApiResult<Json<ValueResponse>> {
    let state = parse_state(&q)?;
    let value = app.with_table(&state, |t| value_of(t, &state))?;
    Ok(Json(ValueResponse { value }))
}

async fn strategy(State(app): State<AppState>, Query(q): Query<HashMap<String, String>>) -> ApiResult<Json<Mixture>> {
    let state = parse_state(&q)?;
    let upcard = q.get("upcard").ok_or_else(|| ApiError::bad_request("missing query parameter upcard"))?;
    let upcard: u32 = upcard.parse().map_err(|_| ApiError::bad_request(format!("bad upcard {upcard:?}")))?;
    let upcard = Card::new(upcard, MAX_N).map_err(|e| ApiError::bad_request(e.to_string()))?;
    if !state.p().contains(upcard) {
        return Err(Error::UpcardNotInDeck(upcard.value()).into());
    }
    Ok(Json(app.mixture(&state, upcard)?))
}
