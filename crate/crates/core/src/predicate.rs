use std::fmt;

/// Index of a state inside its coalgebra.
///
/// States are stored in their canonical order, so comparing ids compares
/// states under the coalgebra's total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the state space, read as a characteristic function `X -> 2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    members: Vec<bool>,
}

impl Predicate {
    pub fn empty(universe: usize) -> Self {
        Predicate { members: vec![false; universe] }
    }

    pub fn full(universe: usize) -> Self {
        Predicate { members: vec![true; universe] }
    }

    pub fn from_states<I>(universe: usize, states: I) -> Self
    where
        I: IntoIterator<Item = StateId>,
    {
        let mut p = Predicate::empty(universe);
        for s in states {
            p.insert(s);
        }
        p
    }

    /// Decodes the low `universe` bits of `mask`; bit `i` is state `i`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Predicate { members: (0..universe).map(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.members.get(s.0).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, s: StateId) {
        self.members[s.0] = true;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| StateId(i))
    }

    /// Least member under the state order.
    pub fn first(&self) -> Option<StateId> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &Predicate) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &Predicate) -> Predicate {
        Predicate {
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| a || b).collect(),
        }
    }

    pub fn intersection(&self, other: &Predicate) -> Predicate {
        Predicate {
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| a && b).collect(),
        }
    }

    pub fn complement(&self) -> Predicate {
        Predicate { members: self.members.iter().map(|&b| !b).collect() }
    }

    pub fn as_bits(&self) -> &[bool] {
        &self.members
    }
}
