//! The computer player: whichever side is to move, play the computed strategy.
//!
//! Off the winning region the engine still moves legally. A spoiler facing a
//! bisimilar pair plays `j = 0, p_0 = χ_X` and the least available pick; a
//! duplicator whose closure answer is illegal answers `χ_X`.

use super::refine::Analysis;
use super::referee::{GameState, Move, Phase};
use super::strategy::{duplicator_pick, duplicator_predicate, spoiler_move, spoiler_pick, validate_step2};
use crate::error::Result;
use crate::functor::Coalgebra;

/// The engine's move for the player to move in `g`, or `None` once the game is over.
pub fn engine_move(c: &Coalgebra, a: &Analysis, g: &GameState) -> Result<Option<Move>> {
    let pos = g.position;
    let mv = match g.phase {
        Phase::SpoilerWon | Phase::DuplicatorWon => return Ok(None),
        Phase::Step1 => match spoiler_move(c, &a.table, pos) {
            Ok((j, predicate)) => Move::Challenge { j, predicate },
            Err(_) => Move::Challenge { j: 0, predicate: c.full() },
        },
        Phase::Step2 => {
            let j = g.j.expect("j set in Step 1");
            let p_j = g.predicate(j).expect("p_j set in Step 1");
            let closed = duplicator_predicate(&a.partition, p_j);
            let predicate =
                if validate_step2(c, g.side(j), g.side(1 - j), p_j, &closed) { closed } else { c.full() };
            Move::Answer { predicate }
        }
        Phase::Step3 => {
            let j = g.j.expect("j set in Step 1");
            let (p_j, p_o) = (g.predicate(j).expect("Step 1 played"), g.predicate(1 - j).expect("Step 2 played"));
            let (ell, state) = match spoiler_pick(c, &a.table, pos, j, p_j, p_o) {
                Ok(pick) => pick,
                Err(_) => g.legal_picks()[0],
            };
            Move::Pick { ell, state }
        }
        Phase::Step4 => {
            let ell = g.ell.expect("ell set in Step 3");
            let picked = g.picked.expect("picked in Step 3");
            let p = g.predicate(1 - ell).expect("Steps 1-2 played");
            Move::Respond { state: duplicator_pick(&a.partition, picked, p)? }
        }
    };
    Ok(Some(mv))
}
