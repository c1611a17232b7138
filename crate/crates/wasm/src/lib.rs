//! Browser bindings. Every call takes the system as CSV text and returns
//! JSON in the same shapes the HTTP service uses.
//!
//! The plain functions are usable natively; the `#[wasm_bindgen]` exports
//! wrap them and turn errors into JS exceptions.

use coalgame::logic::Recode;
use coalgame::play::{Game, MoveView};
use coalgame::{io, Analyzed};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn system(csv: &str) -> Result<Analyzed, String> {
    io::load_str(csv).map(Analyzed::new).map_err(|e| e.to_string())
}

/// The analysis of a CSV system as JSON.
pub fn analyze_json(csv: &str) -> Result<String, String> {
    Ok(serde_json::to_string(&system(csv)?.view()).expect("views serialize"))
}

/// `φ_{x0,x1}`, optionally recoded (`box-dia` or `thresholds`).
pub fn formula_text(csv: &str, x0: &str, x1: &str, recode: Option<&str>) -> Result<String, String> {
    let sys = system(csv)?;
    let target = recode.filter(|r| !r.is_empty()).map(str::parse::<Recode>).transpose().map_err(|e| e.to_string())?;
    let (a, b) = (sys.state(x0).map_err(|e| e.to_string())?, sys.state(x1).map_err(|e| e.to_string())?);
    sys.formula(a, b, target).map(|f| f.to_string()).map_err(|e| e.to_string())
}

/// One game against the engine, held in the page.
#[wasm_bindgen]
pub struct GameSession {
    sys: Analyzed,
    game: Game,
    opening: String,
}

impl GameSession {
    pub fn start(csv: &str, x0: &str, x1: &str, human_role: &str) -> Result<GameSession, String> {
        let sys = system(csv)?;
        let (a, b) = (sys.state(x0).map_err(|e| e.to_string())?, sys.state(x1).map_err(|e| e.to_string())?);
        let human = human_role.parse().map_err(|e: coalgame::Error| e.to_string())?;
        let (game, replies) = Game::new(&sys, a, b, human).map_err(|e| e.to_string())?;
        let opening = serde_json::to_string(&replies).expect("records serialize");
        Ok(GameSession { sys, game, opening })
    }

    /// Submits `{"phase": ..., "payload": ...}`; returns
    /// `{state, engineMoves, winner?, formula?}`. A rejected move leaves the
    /// game as it was.
    pub fn submit(&mut self, move_json: &str) -> Result<String, String> {
        let mv: MoveView = serde_json::from_str(move_json).map_err(|e| format!("bad move: {e}"))?;
        let mv = mv.to_move(&self.sys.coalgebra).map_err(|e| e.to_string())?;
        let replies = self.game.submit(&self.sys, &mv).map_err(|e| e.to_string())?;
        let mut out = json!({
            "state": self.game.view(&self.sys.coalgebra),
            "engineMoves": replies,
        });
        if let Some(w) = self.game.winner() {
            out["winner"] = json!(w.as_str());
        }
        if let Some(f) = self.game.formula(&self.sys) {
            out["formula"] = json!(f.to_string());
        }
        Ok(out.to_string())
    }

    pub fn state_json(&self) -> String {
        serde_json::to_string(&self.game.view(&self.sys.coalgebra)).expect("views serialize")
    }
}

#[wasm_bindgen]
impl GameSession {
    #[wasm_bindgen(constructor)]
    pub fn new(csv: &str, x0: &str, x1: &str, human_role: &str) -> Result<GameSession, JsError> {
        GameSession::start(csv, x0, x1, human_role).map_err(|e| JsError::new(&e))
    }

    /// Engine moves played before the human's first turn, as JSON.
    #[wasm_bindgen(js_name = openingMoves)]
    pub fn opening_moves(&self) -> String {
        self.opening.clone()
    }

    #[wasm_bindgen(js_name = state)]
    pub fn js_state(&self) -> String {
        self.state_json()
    }

    #[wasm_bindgen(js_name = play)]
    pub fn js_play(&mut self, move_json: &str) -> Result<String, JsError> {
        self.submit(move_json).map_err(|e| JsError::new(&e))
    }
}

#[wasm_bindgen]
pub fn analyze(csv: &str) -> Result<String, JsError> {
    analyze_json(csv).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn formula(csv: &str, x0: &str, x1: &str, recode: Option<String>) -> Result<String, JsError> {
    formula_text(csv, x0, x1, recode.as_deref()).map_err(|e| JsError::new(&e))
}
