use std::collections::BTreeMap;

use crate::functor::{Coalgebra, Observation};
use crate::predicate::{Predicate, StateId};

/// Equivalence classes `E(R)` of an equivalence relation on the states.
///
/// Blocks are kept sorted by their least member, and members ascend within a
/// block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<StateId>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// The coarsest partition `{X}` (empty when there are no states).
    pub fn coarsest(n: usize) -> Self {
        Partition::from_blocks(n, if n == 0 { vec![] } else { vec![(0..n).map(StateId).collect()] })
    }

    pub fn discrete(n: usize) -> Self {
        Partition::from_blocks(n, (0..n).map(|i| vec![StateId(i)]).collect())
    }

    /// Canonicalizes arbitrary blocks; panics unless they partition `0..n`.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<StateId>>) -> Self {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort();
        }
        blocks.sort();
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for s in b {
                assert!(block_of[s.0] == usize::MAX, "state {s} is in two blocks");
                block_of[s.0] = i;
            }
        }
        assert!(block_of.iter().all(|&b| b != usize::MAX), "blocks do not cover all states");
        Partition { blocks, block_of }
    }

    /// Groups states by a key, keeping only pairs that already share a block.
    fn split_by<K: Ord>(&self, key: impl Fn(StateId) -> K) -> Partition {
        let mut out = Vec::new();
        for block in &self.blocks {
            let mut groups: BTreeMap<K, Vec<StateId>> = BTreeMap::new();
            for &s in block {
                groups.entry(key(s)).or_default().push(s);
            }
            out.extend(groups.into_values());
        }
        Partition::from_blocks(self.block_of.len(), out)
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, s: StateId) -> usize {
        self.block_of[s.0]
    }

    pub fn same_block(&self, a: StateId, b: StateId) -> bool {
        self.block_of[a.0] == self.block_of[b.0]
    }

    pub fn block_predicate(&self, i: usize) -> Predicate {
        Predicate::from_states(self.universe(), self.blocks[i].iter().copied())
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&s| other.same_block(s, b[0])))
    }

    /// Whether `p` is a union of blocks.
    pub fn is_closed(&self, p: &Predicate) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&s| p.contains(s)) || b.iter().all(|&s| !p.contains(s)))
    }
}

/// `Fχ_P(α(x))` for every state `x` and every block `P` of `part`.
pub(crate) fn signatures(c: &Coalgebra, part: &Partition) -> Vec<Vec<Observation>> {
    let preds: Vec<Predicate> = (0..part.len()).map(|i| part.block_predicate(i)).collect();
    c.states().map(|x| preds.iter().map(|p| c.observe(x, p)).collect()).collect()
}

/// One application of `F_α`: keeps a pair iff the two states agree on
/// `Fχ_P(α(·))` for every block `P` of `r`.
pub fn f_alpha_step(c: &Coalgebra, r: &Partition) -> Partition {
    f_alpha_step_with(r, &signatures(c, r))
}

pub(crate) fn f_alpha_step_with(r: &Partition, sig: &[Vec<Observation>]) -> Partition {
    r.split_by(|x| &sig[x.0])
}
