use super::partition::{signatures, Partition};
use crate::functor::{Coalgebra, Observation};
use crate::predicate::{Predicate, StateId};

/// The spoiler's Step-1 move for a separated pair: play `χ_block` for `state`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub state: StateId,
    pub block: Predicate,
}

/// The pair `(I, T)`: for each ordered pair of states, the round in which
/// refinement first separated them and the move certifying the split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyTable {
    n: usize,
    rounds: Vec<Partition>,
    index: Vec<Option<u32>>,
    moves: Vec<Option<Witness>>,
}

impl StrategyTable {
    /// `I(x0, x1)`; `None` stands for `∞`.
    pub fn index(&self, x0: StateId, x1: StateId) -> Option<u32> {
        self.index[x0.0 * self.n + x1.0]
    }

    /// `T(x0, x1)`, defined exactly where `I` is finite.
    pub fn witness(&self, x0: StateId, x1: StateId) -> Option<&Witness> {
        self.moves[x0.0 * self.n + x1.0].as_ref()
    }

    /// `R_i`, with `R_0` the coarsest partition; the last entry is the fixpoint.
    pub fn round(&self, i: usize) -> &Partition {
        &self.rounds[i.min(self.rounds.len() - 1)]
    }

    pub fn rounds(&self) -> &[Partition] {
        &self.rounds
    }

    pub fn states(&self) -> usize {
        self.n
    }
}

/// Result of partition refinement: `νF_α` and the spoiler strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub partition: Partition,
    pub table: StrategyTable,
}

impl Analysis {
    pub fn bisimilar(&self, x0: StateId, x1: StateId) -> bool {
        self.partition.same_block(x0, x1)
    }
}

fn leq(a: &Observation, b: &Observation) -> bool {
    a.leq(b).expect("observations of one coalgebra share functor and alphabet")
}

/// Computes `νF_α` by fixpoint iteration from `{X}` and records `(I, T)`.
///
/// Pairs are visited in lexicographic state order. A pair separated in round
/// `i` may be split by several blocks of `R_{i-1}`; the recorded witness is
/// the one where `x0`'s observation is not below `x1`'s, if any (so the
/// spoiler plays on `x0`), then the smallest block, then the block with the
/// least member.
pub fn refine(c: &Coalgebra) -> Analysis {
    let n = c.len();
    let mut index = vec![None; n * n];
    let mut moves = vec![None; n * n];
    let mut rounds = vec![Partition::coarsest(n)];
    let mut round = 0u32;
    loop {
        round += 1;
        let prev = rounds.last().expect("at least R_0");
        let sig = signatures(c, prev);
        let next = super::partition::f_alpha_step_with(prev, &sig);
        if next == *prev {
            break;
        }
        for x0 in c.states() {
            for x1 in c.states() {
                if !prev.same_block(x0, x1) || next.same_block(x0, x1) {
                    continue;
                }
                let mut best: Option<((u8, usize, usize), Witness)> = None;
                for (k, block) in prev.blocks().iter().enumerate() {
                    let (o0, o1) = (&sig[x0.0][k], &sig[x1.0][k]);
                    if o0 == o1 {
                        continue;
                    }
                    let (dir, state) = if !leq(o0, o1) {
                        (0, x0)
                    } else if !leq(o1, o0) {
                        (1, x1)
                    } else {
                        // Unreachable for an antisymmetric lifting.
                        (0, x0)
                    };
                    let key = (dir, block.len(), k);
                    if best.as_ref().is_none_or(|(b, _)| key < *b) {
                        best = Some((key, Witness { state, block: prev.block_predicate(k) }));
                    }
                }
                let (_, w) = best.expect("separated pairs differ on some block");
                index[x0.0 * n + x1.0] = Some(round);
                moves[x0.0 * n + x1.0] = Some(w);
            }
        }
        rounds.push(next);
    }
    let partition = rounds.last().cloned().expect("at least R_0");
    Analysis { partition, table: StrategyTable { n, rounds, index, moves } }
}
