//! The referee for a live game: legality checks and winner detection.

use std::fmt;

use super::strategy::validate_step2;
use crate::error::{Error, Result};
use crate::functor::Coalgebra;
use crate::predicate::{Predicate, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Step1,
    Step2,
    Step3,
    Step4,
    SpoilerWon,
    DuplicatorWon,
}

impl Phase {
    pub fn is_over(self) -> bool {
        matches!(self, Phase::SpoilerWon | Phase::DuplicatorWon)
    }

    /// Who moves next, if anyone.
    pub fn mover(self) -> Option<Player> {
        match self {
            Phase::Step1 | Phase::Step3 => Some(Player::Spoiler),
            Phase::Step2 | Phase::Step4 => Some(Player::Duplicator),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Step1 => "step1",
            Phase::Step2 => "step2",
            Phase::Step3 => "step3",
            Phase::Step4 => "step4",
            Phase::SpoilerWon => "spoilerWon",
            Phase::DuplicatorWon => "duplicatorWon",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Spoiler,
    Duplicator,
}

impl Player {
    pub fn as_str(self) -> &'static str {
        match self {
            Player::Spoiler => "spoiler",
            Player::Duplicator => "duplicator",
        }
    }
}

/// A move, one variant per step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    /// Step 1: the spoiler picks a side `j` and a predicate for it.
    Challenge { j: usize, predicate: Predicate },
    /// Step 2: the duplicator's predicate for the other side.
    Answer { predicate: Predicate },
    /// Step 3: the spoiler picks `x'_ℓ` inside `p_ℓ`.
    Pick { ell: usize, state: StateId },
    /// Step 4: the duplicator picks `x'_{1−ℓ}` inside `p_{1−ℓ}`.
    Respond { state: StateId },
}

impl Move {
    pub fn phase(&self) -> Phase {
        match self {
            Move::Challenge { .. } => Phase::Step1,
            Move::Answer { .. } => Phase::Step2,
            Move::Pick { .. } => Phase::Step3,
            Move::Respond { .. } => Phase::Step4,
        }
    }
}

/// Everything the referee knows about a game in progress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub position: (StateId, StateId),
    pub phase: Phase,
    /// Side chosen in Step 1.
    pub j: Option<usize>,
    /// `p_0`, `p_1` as played this round.
    pub predicates: [Option<Predicate>; 2],
    /// Side chosen in Step 3 and the state picked there.
    pub ell: Option<usize>,
    pub picked: Option<StateId>,
    /// Completed rounds.
    pub round: u32,
    /// Positions of completed rounds, oldest first.
    pub history: Vec<(StateId, StateId)>,
    /// After this many rounds the duplicator is declared the winner.
    pub round_cap: u32,
    /// Why the game ended.
    pub reason: Option<String>,
}

impl GameState {
    /// A fresh game at `position` with the default cap `2·|X|²`.
    pub fn new(c: &Coalgebra, position: (StateId, StateId)) -> Self {
        let n = c.len() as u32;
        Self::with_cap(position, (2 * n * n).max(1))
    }

    pub fn with_cap(position: (StateId, StateId), round_cap: u32) -> Self {
        GameState {
            position,
            phase: Phase::Step1,
            j: None,
            predicates: [None, None],
            ell: None,
            picked: None,
            round: 0,
            history: Vec::new(),
            round_cap,
            reason: None,
        }
    }

    pub fn side(&self, i: usize) -> StateId {
        if i == 0 {
            self.position.0
        } else {
            self.position.1
        }
    }

    pub fn predicate(&self, i: usize) -> Option<&Predicate> {
        self.predicates[i].as_ref()
    }

    /// States the player to move may pick in Step 3 or Step 4.
    pub fn legal_picks(&self) -> Vec<(usize, StateId)> {
        match self.phase {
            Phase::Step3 => (0..2)
                .flat_map(|l| self.predicates[l].iter().flat_map(move |p| p.iter().map(move |s| (l, s))))
                .collect(),
            Phase::Step4 => {
                let l = 1 - self.ell.expect("ell set in Step 3");
                self.predicates[l].iter().flat_map(|p| p.iter().map(|s| (l, s))).collect()
            }
            _ => Vec::new(),
        }
    }

    fn finish(&mut self, phase: Phase, reason: impl Into<String>) {
        self.phase = phase;
        self.reason = Some(reason.into());
    }
}

/// Applies `mv` to `g`, returning the successor state. `g` is unchanged on error.
pub fn advance(c: &Coalgebra, g: &GameState, mv: &Move) -> Result<GameState> {
    if g.phase.is_over() {
        return Err(Error::GameOver);
    }
    if mv.phase() != g.phase {
        return Err(Error::OutOfTurn { expected: expected(g.phase) });
    }
    let n = c.len();
    let check_universe = |p: &Predicate| {
        if p.universe() == n {
            Ok(())
        } else {
            Err(Error::IllegalMove(format!("predicate ranges over {} states, system has {n}", p.universe())))
        }
    };
    let mut next = g.clone();
    match mv {
        Move::Challenge { j, predicate } => {
            if *j > 1 {
                return Err(Error::IllegalMove(format!("side j must be 0 or 1, got {j}")));
            }
            check_universe(predicate)?;
            next.j = Some(*j);
            next.predicates[*j] = Some(predicate.clone());
            next.phase = Phase::Step2;
            // Legal answers are upward closed, so χ_X is legal iff any answer is.
            if !validate_step2(c, g.side(*j), g.side(1 - *j), predicate, &c.full()) {
                let v = c.observe(g.side(*j), predicate);
                next.finish(
                    Phase::SpoilerWon,
                    format!(
                        "duplicator has no Step-2 answer: no predicate p lifts {} to an observation above {v}",
                        c.name(g.side(1 - *j))
                    ),
                );
            }
        }
        Move::Answer { predicate } => {
            check_universe(predicate)?;
            let j = g.j.expect("j set in Step 1");
            let p_j = g.predicates[j].as_ref().expect("p_j set in Step 1");
            let (x_j, x_o) = (g.side(j), g.side(1 - j));
            if !validate_step2(c, x_j, x_o, p_j, predicate) {
                return Err(Error::IllegalMove(format!(
                    "Step 2 condition Fp_j(α(x_j)) ≤^F Fp_{{1−j}}(α(x_{{1−j}})) fails: {} ≰^F {}",
                    c.observe(x_j, p_j),
                    c.observe(x_o, predicate)
                )));
            }
            next.predicates[1 - j] = Some(predicate.clone());
            next.phase = Phase::Step3;
            if p_j.is_empty() && predicate.is_empty() {
                next.finish(Phase::DuplicatorWon, "spoiler has no Step-3 move: both predicates are empty");
            }
        }
        Move::Pick { ell, state } => {
            if *ell > 1 {
                return Err(Error::IllegalMove(format!("side ℓ must be 0 or 1, got {ell}")));
            }
            let p = g.predicates[*ell].as_ref().expect("predicates set in Steps 1-2");
            if state.0 >= n || !p.contains(*state) {
                return Err(Error::IllegalMove(format!(
                    "Step 3 requires p_ℓ(x'_ℓ) = 1, but {} is not in p_{ell}",
                    name_or_index(c, *state)
                )));
            }
            next.ell = Some(*ell);
            next.picked = Some(*state);
            next.phase = Phase::Step4;
            if g.predicates[1 - *ell].as_ref().is_none_or(Predicate::is_empty) {
                next.finish(Phase::SpoilerWon, format!("duplicator has no Step-4 answer: p_{} is empty", 1 - ell));
            }
        }
        Move::Respond { state } => {
            let ell = g.ell.expect("ell set in Step 3");
            let p = g.predicates[1 - ell].as_ref().expect("predicates set in Steps 1-2");
            if state.0 >= n || !p.contains(*state) {
                return Err(Error::IllegalMove(format!(
                    "Step 4 requires p_{{1−ℓ}}(x'_{{1−ℓ}}) = 1, but {} is not in p_{}",
                    name_or_index(c, *state),
                    1 - ell
                )));
            }
            let picked = g.picked.expect("picked in Step 3");
            let position = if ell == 0 { (picked, *state) } else { (*state, picked) };
            next.history.push(g.position);
            next.position = position;
            next.round += 1;
            next.j = None;
            next.predicates = [None, None];
            next.ell = None;
            next.picked = None;
            next.phase = Phase::Step1;
            if next.history.contains(&position) || position == g.position {
                next.finish(
                    Phase::DuplicatorWon,
                    format!("position ({}, {}) repeated", c.name(position.0), c.name(position.1)),
                );
            } else if next.round >= next.round_cap {
                next.finish(Phase::DuplicatorWon, format!("round cap of {} reached", next.round_cap));
            }
        }
    }
    Ok(next)
}

fn expected(phase: Phase) -> &'static str {
    match phase {
        Phase::Step1 => "Step 1 (spoiler)",
        Phase::Step2 => "Step 2 (duplicator)",
        Phase::Step3 => "Step 3 (spoiler)",
        Phase::Step4 => "Step 4 (duplicator)",
        _ => "no",
    }
}

fn name_or_index(c: &Coalgebra, s: StateId) -> String {
    if s.0 < c.len() {
        c.name(s).to_string()
    } else {
        s.to_string()
    }
}
