use std::collections::{BTreeSet, HashMap};

use super::formula::{Formula, Modality};
use crate::error::{Error, Result};
use crate::functor::Coalgebra;
use crate::game::StrategyTable;
use crate::predicate::StateId;

/// Builds distinguishing formulas `φ_{x0,x1}` from the strategy table,
/// memoizing per ordered pair.
///
/// For `T(x0, x1) = (s, P)` the formula is `[↑v]φ'` (negated when `s = x1`)
/// with `v = Fχ_P(α(s))`. The body `φ'` is `tt` in round one and otherwise
/// the conjunction of `φ_{x0', r}` where `x0'` is the least state of `P` and
/// `r` ranges over the least states of the other round-`(I−1)` blocks that
/// contain a successor of `x0` or `x1`. The cone only inspects the body on
/// those successors, so blocks they never reach need no conjunct.
pub struct Distinguisher<'a> {
    c: &'a Coalgebra,
    table: &'a StrategyTable,
    memo: HashMap<(StateId, StateId), Formula>,
}

impl<'a> Distinguisher<'a> {
    pub fn new(c: &'a Coalgebra, table: &'a StrategyTable) -> Self {
        Distinguisher { c, table, memo: HashMap::new() }
    }

    pub fn formula(&mut self, x0: StateId, x1: StateId) -> Result<Formula> {
        if let Some(f) = self.memo.get(&(x0, x1)) {
            return Ok(f.clone());
        }
        let (Some(i), Some(w)) = (self.table.index(x0, x1), self.table.witness(x0, x1)) else {
            return Err(Error::Bisimilar(self.c.name(x0).to_string(), self.c.name(x1).to_string()));
        };
        let (s, block) = (w.state, w.block.clone());
        let v = self.c.observe(s, &block);
        let body = if i == 1 {
            Formula::tt()
        } else {
            let x0p = block.first().expect("blocks are nonempty");
            let succ: BTreeSet<StateId> = self.c.support(x0).into_iter().chain(self.c.support(x1)).collect();
            let prev = self.table.round(i as usize - 1);
            let mut conjuncts: Vec<Formula> = Vec::new();
            for b in prev.blocks() {
                let r = b[0];
                if block.contains(r) || !b.iter().any(|y| succ.contains(y)) {
                    continue;
                }
                let f = self.formula(x0p, r)?;
                if !conjuncts.contains(&f) {
                    conjuncts.push(f);
                }
            }
            Formula::conj(conjuncts)
        };
        let f = Formula::modal(Modality::Cone(v), body);
        let f = if s == x0 { f } else { Formula::neg(f) };
        self.memo.insert((x0, x1), f.clone());
        Ok(f)
    }
}

/// `φ_{x0,x1}`, true at `x0` and false at `x1`.
pub fn distinguishing_formula(c: &Coalgebra, table: &StrategyTable, x0: StateId, x1: StateId) -> Result<Formula> {
    Distinguisher::new(c, table).formula(x0, x1)
}
