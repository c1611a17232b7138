//! A system together with its analysis, human-versus-engine games, and the
//! serializable views shared by the HTTP service, the CLI and the browser demo.
//!
//! States travel by name; predicates are arrays of state names.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functor::Coalgebra;
use crate::game::{advance, engine_move, refine, Analysis, GameState, Move, Phase, Player};
use crate::logic::{distinguishing_formula, recode, Formula, Recode};
use crate::predicate::{Predicate, StateId};
use crate::rational;

/// A coalgebra with its refinement result, computed once.
#[derive(Debug, Clone)]
pub struct Analyzed {
    pub coalgebra: Coalgebra,
    pub analysis: Analysis,
}

impl Analyzed {
    pub fn new(coalgebra: Coalgebra) -> Self {
        let analysis = refine(&coalgebra);
        Analyzed { coalgebra, analysis }
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.coalgebra.state(name)
    }

    pub fn verdict(&self, x0: StateId, x1: StateId) -> Verdict {
        let c = &self.coalgebra;
        let t = &self.analysis.table;
        Verdict {
            x0: c.name(x0).to_string(),
            x1: c.name(x1).to_string(),
            bisimilar: self.analysis.bisimilar(x0, x1),
            index: t.index(x0, x1),
            witness: t.witness(x0, x1).map(|w| WitnessView {
                state: c.name(w.state).to_string(),
                block: c.predicate_names(&w.block),
            }),
        }
    }

    /// `φ_{x0,x1}`, optionally recoded into the functor's named modalities.
    pub fn formula(&self, x0: StateId, x1: StateId, target: Option<Recode>) -> Result<Formula> {
        let f = distinguishing_formula(&self.coalgebra, &self.analysis.table, x0, x1)?;
        match target {
            None => Ok(f),
            Some(t) => recode(&self.coalgebra, &f, t),
        }
    }

    pub fn view(&self) -> SystemView {
        let c = &self.coalgebra;
        let names = |b: &[StateId]| b.iter().map(|&s| c.name(s).to_string()).collect::<Vec<_>>();
        let mut verdicts = Vec::new();
        for x0 in c.states() {
            for x1 in c.states().filter(|&x1| x1 > x0) {
                verdicts.push(self.verdict(x0, x1));
            }
        }
        SystemView {
            kind: c.kind().as_str().to_string(),
            alphabet: c.alphabet().iter().map(ToString::to_string).collect(),
            states: c.state_names().to_vec(),
            transitions: c
                .edges()
                .into_iter()
                .map(|(s, a, d, w)| TransitionView {
                    src: c.name(s).to_string(),
                    label: a.to_string(),
                    dst: c.name(d).to_string(),
                    probability: w.as_ref().map(rational::format),
                })
                .collect(),
            terminations: c
                .states()
                .flat_map(|x| c.alphabet().iter().filter(move |a| c.terminates(x, a)).map(move |a| (x, a)))
                .map(|(x, a)| TerminationView { src: c.name(x).to_string(), label: a.to_string() })
                .collect(),
            blocks: self.analysis.partition.blocks().iter().map(|b| names(b)).collect(),
            rounds: self
                .analysis
                .table
                .rounds()
                .iter()
                .map(|r| r.blocks().iter().map(|b| names(b)).collect())
                .collect(),
            verdicts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessView {
    pub state: String,
    pub block: Vec<String>,
}

/// Bisimilarity of one pair, with `I` and `T` when they are separated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub x0: String,
    pub x1: String,
    pub bisimilar: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransitionView {
    pub src: String,
    pub label: String,
    pub dst: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TerminationView {
    pub src: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemView {
    pub kind: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub transitions: Vec<TransitionView>,
    pub terminations: Vec<TerminationView>,
    /// Blocks of the bisimilarity partition.
    pub blocks: Vec<Vec<String>>,
    /// `R_0, R_1, …` up to the fixpoint.
    pub rounds: Vec<Vec<Vec<String>>>,
    /// One entry per unordered pair of distinct states.
    pub verdicts: Vec<Verdict>,
}

/// A move as it appears on the wire: `{"phase": "step1", "payload": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "phase", content = "payload", rename_all = "camelCase")]
pub enum MoveView {
    Step1 { j: usize, predicate: Vec<String> },
    Step2 { predicate: Vec<String> },
    Step3 { ell: usize, state: String },
    Step4 { state: String },
}

impl MoveView {
    pub fn from_move(c: &Coalgebra, mv: &Move) -> Self {
        match mv {
            Move::Challenge { j, predicate } => MoveView::Step1 { j: *j, predicate: c.predicate_names(predicate) },
            Move::Answer { predicate } => MoveView::Step2 { predicate: c.predicate_names(predicate) },
            Move::Pick { ell, state } => MoveView::Step3 { ell: *ell, state: c.name(*state).to_string() },
            Move::Respond { state } => MoveView::Step4 { state: c.name(*state).to_string() },
        }
    }

    /// Resolves state names; unknown names make the move illegal.
    pub fn to_move(&self, c: &Coalgebra) -> Result<Move> {
        let state = |name: &str| c.state(name).map_err(|_| Error::IllegalMove(format!("unknown state `{name}`")));
        let predicate = |names: &[String]| -> Result<Predicate> {
            let mut p = Predicate::empty(c.len());
            for n in names {
                p.insert(state(n)?);
            }
            Ok(p)
        };
        Ok(match self {
            MoveView::Step1 { j, predicate: p } => Move::Challenge { j: *j, predicate: predicate(p)? },
            MoveView::Step2 { predicate: p } => Move::Answer { predicate: predicate(p)? },
            MoveView::Step3 { ell, state: s } => Move::Pick { ell: *ell, state: state(s)? },
            MoveView::Step4 { state: s } => Move::Respond { state: state(s)? },
        })
    }
}

/// A move together with who made it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveRecord {
    pub player: String,
    #[serde(rename = "move")]
    pub mv: MoveView,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PendingPredicates {
    pub p0: Option<Vec<String>>,
    pub p1: Option<Vec<String>>,
}

/// The client-facing game state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GameView {
    pub phase: String,
    pub position: [String; 2],
    pub round: u32,
    pub round_cap: u32,
    /// Whose move it is; absent once the game is over.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub turn: Option<String>,
    pub human_role: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picked: Option<String>,
    pub pending_predicates: PendingPredicates,
    /// In Steps 3 and 4: the states the player to move may pick, as `[side, state]`.
    pub legal_hints: Vec<(usize, String)>,
    pub history: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// One game between a human and the engine.
#[derive(Debug, Clone)]
pub struct Game {
    pub start: (StateId, StateId),
    pub human: Player,
    pub state: GameState,
    pub transcript: Vec<MoveRecord>,
}

impl Game {
    /// Starts a game; if the engine moves first its opening is played at once
    /// and returned.
    pub fn new(sys: &Analyzed, x0: StateId, x1: StateId, human: Player) -> Result<(Game, Vec<MoveRecord>)> {
        let mut g = Game { start: (x0, x1), human, state: GameState::new(&sys.coalgebra, (x0, x1)), transcript: Vec::new() };
        let replies = g.engine_replies(sys)?;
        Ok((g, replies))
    }

    /// Applies the human's move, then the engine's replies until the human
    /// is to move again or the game ends. Returns the engine's moves. On error
    /// the game is unchanged.
    pub fn submit(&mut self, sys: &Analyzed, mv: &Move) -> Result<Vec<MoveRecord>> {
        if self.state.phase.is_over() {
            return Err(Error::GameOver);
        }
        if self.state.phase.mover() != Some(self.human) {
            return Err(Error::OutOfTurn { expected: engine_turn(self.state.phase) });
        }
        let next = advance(&sys.coalgebra, &self.state, mv)?;
        let mut trial = self.clone();
        trial.state = next;
        trial.transcript.push(MoveRecord { player: self.human.as_str().into(), mv: MoveView::from_move(&sys.coalgebra, mv) });
        let replies = trial.engine_replies(sys)?;
        *self = trial;
        Ok(replies)
    }

    fn engine_replies(&mut self, sys: &Analyzed) -> Result<Vec<MoveRecord>> {
        let mut out = Vec::new();
        while let Some(mover) = self.state.phase.mover() {
            if mover == self.human {
                break;
            }
            let mv = engine_move(&sys.coalgebra, &sys.analysis, &self.state)?.expect("game not over");
            self.state = advance(&sys.coalgebra, &self.state, &mv)?;
            let rec = MoveRecord { player: mover.as_str().into(), mv: MoveView::from_move(&sys.coalgebra, &mv) };
            self.transcript.push(rec.clone());
            out.push(rec);
        }
        Ok(out)
    }

    pub fn winner(&self) -> Option<Player> {
        match self.state.phase {
            Phase::SpoilerWon => Some(Player::Spoiler),
            Phase::DuplicatorWon => Some(Player::Duplicator),
            _ => None,
        }
    }

    /// The distinguishing formula of the starting pair, once the engine
    /// spoiler has won.
    pub fn formula(&self, sys: &Analyzed) -> Option<Formula> {
        if self.winner() == Some(Player::Spoiler) && self.human == Player::Duplicator {
            sys.formula(self.start.0, self.start.1, None).ok()
        } else {
            None
        }
    }

    pub fn view(&self, c: &Coalgebra) -> GameView {
        let g = &self.state;
        let names = |p: &Option<Predicate>| p.as_ref().map(|p| c.predicate_names(p));
        let pair = |(a, b): (StateId, StateId)| [c.name(a).to_string(), c.name(b).to_string()];
        GameView {
            phase: g.phase.as_str().into(),
            position: pair(g.position),
            round: g.round,
            round_cap: g.round_cap,
            turn: g.phase.mover().map(|p| p.as_str().into()),
            human_role: self.human.as_str().into(),
            j: g.j,
            ell: g.ell,
            picked: g.picked.map(|s| c.name(s).to_string()),
            pending_predicates: PendingPredicates { p0: names(&g.predicates[0]), p1: names(&g.predicates[1]) },
            legal_hints: g.legal_picks().into_iter().map(|(l, s)| (l, c.name(s).to_string())).collect(),
            history: g.history.iter().map(|&p| pair(p)).collect(),
            winner: self.winner().map(|p| p.as_str().into()),
            reason: g.reason.clone(),
        }
    }
}

fn engine_turn(phase: Phase) -> &'static str {
    match phase.mover() {
        Some(Player::Spoiler) => "engine spoiler",
        Some(Player::Duplicator) => "engine duplicator",
        None => "no",
    }
}

impl std::str::FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spoiler" => Ok(Player::Spoiler),
            "duplicator" => Ok(Player::Duplicator),
            other => Err(Error::IllegalMove(format!("unknown role `{other}` (expected spoiler or duplicator)"))),
        }
    }
}
