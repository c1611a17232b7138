//! Winning strategies read off the refinement result.
//!
//! The spoiler follows `(I, T)`: open with `T(x0, x1)` and then pick a state
//! that forces `I` down. The duplicator answers with the closure of the
//! spoiler's predicate under the bisimilarity partition and then stays inside
//! the block of the spoiler's pick.

use super::partition::Partition;
use super::refine::StrategyTable;
use crate::error::{Error, Result};
use crate::functor::Coalgebra;
use crate::predicate::{Predicate, StateId};

/// Step 1 for the spoiler: `(j, p_j)` with `T(pos) = (x_j, P)` and `p_j = χ_P`.
pub fn spoiler_move(c: &Coalgebra, st: &StrategyTable, pos: (StateId, StateId)) -> Result<(usize, Predicate)> {
    let w = st.witness(pos.0, pos.1).ok_or_else(|| bisimilar(c, pos))?;
    let j = if w.state == pos.0 { 0 } else { 1 };
    Ok((j, w.block.clone()))
}

/// Step 3 for the spoiler: switch to the duplicator's predicate (`ℓ = 1 − j`)
/// and take the least state `x'` in it with `I(x_j', x') < I(pos)` for every
/// `x_j'` in `p_j`.
pub fn spoiler_pick(
    c: &Coalgebra,
    st: &StrategyTable,
    pos: (StateId, StateId),
    j: usize,
    p_j: &Predicate,
    p_other: &Predicate,
) -> Result<(usize, StateId)> {
    let bound = st.index(pos.0, pos.1).ok_or_else(|| bisimilar(c, pos))?;
    let below = |a: StateId, b: StateId| st.index(a, b).is_some_and(|i| i < bound);
    p_other
        .iter()
        .find(|&x| p_j.iter().all(|y| below(y, x)))
        .map(|x| (1 - j, x))
        .ok_or_else(|| {
            Error::IllegalMove(format!(
                "no Step-3 pick lowers I below {bound}; the duplicator's predicate violates the Step 2 condition"
            ))
        })
}

/// Step 2 for the duplicator: `[p_j]` closed under the partition.
pub fn duplicator_predicate(part: &Partition, p_j: &Predicate) -> Predicate {
    let mut out = Predicate::empty(p_j.universe());
    for block in part.blocks() {
        if block.iter().any(|&s| p_j.contains(s)) {
            for &s in block {
                out.insert(s);
            }
        }
    }
    out
}

/// Step 4 for the duplicator: the least state of `p_other` in the block of
/// `picked`, else the least state of `p_other`.
pub fn duplicator_pick(part: &Partition, picked: StateId, p_other: &Predicate) -> Result<StateId> {
    p_other
        .iter()
        .find(|&s| part.same_block(s, picked))
        .or_else(|| p_other.first())
        .ok_or_else(|| Error::IllegalMove("no state available for the duplicator in Step 4".into()))
}

/// `Fp_j(α(x_j)) ≤^F Fp_{1−j}(α(x_{1−j}))`.
pub fn validate_step2(c: &Coalgebra, x_j: StateId, x_other: StateId, p_j: &Predicate, p_other: &Predicate) -> bool {
    c.observe(x_j, p_j).leq(&c.observe(x_other, p_other)).unwrap_or(false)
}

fn bisimilar(c: &Coalgebra, pos: (StateId, StateId)) -> Error {
    Error::Bisimilar(c.name(pos.0).to_string(), c.name(pos.1).to_string())
}
