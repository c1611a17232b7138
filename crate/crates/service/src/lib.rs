//! HTTP JSON API over in-memory sessions. A session holds one analysed
//! system and any number of games against the engine.
//!
//! Routes live under `/api/systems`; see [`router`].

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use coalgame::functor::{Kind, Row, SystemDesc};
use coalgame::logic::Recode;
use coalgame::play::{Game, GameView, MoveRecord, MoveView, SystemView, TerminationView, TransitionView};
use coalgame::{io, rational, Analyzed, Coalgebra, Error};
use serde::{Deserialize, Serialize};
use uuid::Uuid;

pub const DEFAULT_IDLE: Duration = Duration::from_secs(3600);

struct Session {
    system: Arc<Analyzed>,
    games: Mutex<HashMap<Uuid, Arc<Mutex<Game>>>>,
    touched: Mutex<Instant>,
}

/// Shared service state. Cloning is cheap.
#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<Uuid, Arc<Session>>>>,
    idle: Duration,
}

impl Default for AppState {
    fn default() -> Self {
        AppState::with_idle(DEFAULT_IDLE)
    }
}

impl AppState {
    /// Sessions untouched for longer than `idle` are dropped.
    pub fn with_idle(idle: Duration) -> Self {
        AppState { sessions: Arc::default(), idle }
    }

    pub fn session_count(&self) -> usize {
        self.sweep();
        self.sessions.lock().unwrap().len()
    }

    fn sweep(&self) {
        let idle = self.idle;
        self.sessions.lock().unwrap().retain(|_, s| s.touched.lock().unwrap().elapsed() <= idle);
    }

    fn session(&self, sid: &str) -> Result<Arc<Session>, ApiError> {
        self.sweep();
        let s = Uuid::parse_str(sid)
            .ok()
            .and_then(|id| self.sessions.lock().unwrap().get(&id).cloned())
            .ok_or_else(|| ApiError::not_found(format!("unknown session `{sid}`")))?;
        *s.touched.lock().unwrap() = Instant::now();
        Ok(s)
    }

    fn insert(&self, system: Analyzed) -> Uuid {
        self.sweep();
        let id = Uuid::new_v4();
        let s = Session { system: Arc::new(system), games: Mutex::default(), touched: Mutex::new(Instant::now()) };
        self.sessions.lock().unwrap().insert(id, Arc::new(s));
        id
    }
}

impl Session {
    fn game(&self, gid: &str) -> Result<Arc<Mutex<Game>>, ApiError> {
        Uuid::parse_str(gid)
            .ok()
            .and_then(|id| self.games.lock().unwrap().get(&id).cloned())
            .ok_or_else(|| ApiError::not_found(format!("unknown game `{gid}`")))
    }
}

/// An error response: `{"error": "..."}` with a status code.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn not_found(message: String) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, message }
    }

    fn unprocessable(message: String) -> Self {
        ApiError { status: StatusCode::UNPROCESSABLE_ENTITY, message }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::IllegalMove(_) | Error::OutOfTurn { .. } | Error::GameOver => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError { status, message: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Structured alternative to a CSV upload; the same shape the API returns.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemBody {
    pub kind: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<TransitionView>,
    #[serde(default)]
    pub terminations: Vec<TerminationView>,
}

impl SystemBody {
    fn into_coalgebra(self) -> Result<Coalgebra, Error> {
        let kind = match self.kind.as_str() {
            "lts" => Kind::Lts,
            "pts" => Kind::Pts,
            other => return Err(Error::Syntax { line: 0, message: format!("unknown kind `{other}`") }),
        };
        let mut rows = Vec::new();
        for t in self.transitions {
            let weight = match t.probability {
                Some(p) => Some(rational::parse(&p).map_err(|message| Error::Syntax { line: 0, message })?),
                None => None,
            };
            rows.push(Row::Trans { src: t.src, label: t.label, dst: t.dst, weight });
        }
        rows.extend(self.terminations.into_iter().map(|t| Row::Term { src: t.src, label: t.label }));
        Coalgebra::from_desc(&SystemDesc { kind, alphabet: self.alphabet, states: self.states, rows })
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemResponse {
    pub session_id: String,
    #[serde(flatten)]
    pub system: SystemView,
}

#[derive(Debug, Deserialize)]
pub struct FormulaQuery {
    pub x0: String,
    pub x1: String,
    pub recode: Option<String>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaResponse {
    pub x0: String,
    pub x1: String,
    pub index: u32,
    pub depth: usize,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recode: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NewGame {
    pub x0: String,
    pub x1: String,
    pub human_role: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GameResponse {
    pub game_id: String,
    pub state: GameView,
    pub engine_moves: Vec<MoveRecord>,
    pub transcript: Vec<MoveRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveResponse {
    pub state: GameView,
    pub engine_moves: Vec<MoveRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/systems", post(create_system))
        .route("/api/systems/{sid}", get(get_system))
        .route("/api/systems/{sid}/formula", get(get_formula))
        .route("/api/systems/{sid}/games", post(create_game))
        .route("/api/systems/{sid}/games/{gid}", get(get_game))
        .route("/api/systems/{sid}/games/{gid}/moves", post(submit_move))
        .with_state(state)
}

/// Serves the API on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::default())).await
}

async fn create_system(State(app): State<AppState>, headers: HeaderMap, body: String) -> ApiResult<SystemResponse> {
    let json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"))
        || body.trim_start().starts_with('{');
    let c = if json {
        let b: SystemBody = serde_json::from_str(&body).map_err(|e| ApiError::unprocessable(e.to_string()))?;
        b.into_coalgebra()?
    } else {
        io::load_str(&body)?
    };
    let system = Analyzed::new(c);
    let view = system.view();
    let id = app.insert(system);
    Ok(Json(SystemResponse { session_id: id.to_string(), system: view }))
}

async fn get_system(State(app): State<AppState>, Path(sid): Path<String>) -> ApiResult<SystemResponse> {
    let s = app.session(&sid)?;
    Ok(Json(SystemResponse { session_id: sid, system: s.system.view() }))
}

async fn get_formula(
    State(app): State<AppState>,
    Path(sid): Path<String>,
    Query(q): Query<FormulaQuery>,
) -> ApiResult<FormulaResponse> {
    let s = app.session(&sid)?;
    let sys = &s.system;
    let (x0, x1) = (sys.state(&q.x0)?, sys.state(&q.x1)?);
    let target = q.recode.as_deref().filter(|r| !r.is_empty()).map(str::parse::<Recode>).transpose()?;
    let f = sys.formula(x0, x1, target)?;
    Ok(Json(FormulaResponse {
        index: sys.analysis.table.index(x0, x1).expect("a formula exists only for separated pairs"),
        depth: f.modal_depth(),
        formula: f.to_string(),
        recode: q.recode.filter(|r| !r.is_empty()),
        x0: q.x0,
        x1: q.x1,
    }))
}

async fn create_game(
    State(app): State<AppState>,
    Path(sid): Path<String>,
    Json(req): Json<NewGame>,
) -> ApiResult<GameResponse> {
    let s = app.session(&sid)?;
    let sys = &s.system;
    let (x0, x1) = (sys.state(&req.x0)?, sys.state(&req.x1)?);
    let human = req.human_role.parse().map_err(|e: Error| ApiError::unprocessable(e.to_string()))?;
    let (game, engine_moves) = Game::new(sys, x0, x1, human)?;
    let id = Uuid::new_v4();
    let resp = game_response(sys, id, &game, engine_moves);
    s.games.lock().unwrap().insert(id, Arc::new(Mutex::new(game)));
    Ok(Json(resp))
}

async fn get_game(State(app): State<AppState>, Path((sid, gid)): Path<(String, String)>) -> ApiResult<GameResponse> {
    let s = app.session(&sid)?;
    let game = s.game(&gid)?;
    let game = game.lock().unwrap();
    Ok(Json(game_response(&s.system, Uuid::parse_str(&gid).expect("looked up"), &game, Vec::new())))
}

async fn submit_move(
    State(app): State<AppState>,
    Path((sid, gid)): Path<(String, String)>,
    Json(mv): Json<MoveView>,
) -> ApiResult<MoveResponse> {
    let s = app.session(&sid)?;
    let sys = &s.system;
    let game = s.game(&gid)?;
    let mut game = game.lock().unwrap();
    let mv = mv.to_move(&sys.coalgebra)?;
    let engine_moves = game.submit(sys, &mv)?;
    Ok(Json(MoveResponse {
        state: game.view(&sys.coalgebra),
        engine_moves,
        winner: game.winner().map(|p| p.as_str().to_string()),
        formula: game.formula(sys).map(|f| f.to_string()),
    }))
}

fn game_response(sys: &Analyzed, id: Uuid, game: &Game, engine_moves: Vec<MoveRecord>) -> GameResponse {
    GameResponse {
        game_id: id.to_string(),
        state: game.view(&sys.coalgebra),
        engine_moves,
        transcript: game.transcript.clone(),
        winner: game.winner().map(|p| p.as_str().to_string()),
        formula: game.formula(sys).map(|f| f.to_string()),
    }
}
