use std::collections::BTreeSet;
use std::fmt;

use super::{Functor, Kind, Label, Observation, Row, SystemDesc, Violation};
use crate::error::{Error, Result};
use crate::predicate::{Predicate, StateId};

/// An element of `P_f(A × 2)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LtsObs(BTreeSet<(Label, bool)>);

impl LtsObs {
    pub fn new<I: IntoIterator<Item = (Label, bool)>>(pairs: I) -> Self {
        LtsObs(pairs.into_iter().collect())
    }

    pub fn contains(&self, label: &Label, bit: bool) -> bool {
        self.0.contains(&(label.clone(), bit))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Label, bool)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies `f: 2 -> 2` to every bit, i.e. `Ff(self)`.
    pub fn map_bits(&self, f: impl Fn(bool) -> bool) -> LtsObs {
        LtsObs(self.0.iter().map(|(l, b)| (l.clone(), f(*b))).collect())
    }
}

impl fmt::Display for LtsObs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (label, bit)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{})", label, u8::from(*bit))?;
        }
        f.write_str("}")
    }
}

/// Egli–Milner lifting of `0 ≤ 1`, labels matched exactly.
pub(crate) fn leq(lhs: &LtsObs, rhs: &LtsObs) -> bool {
    let forward = lhs.0.iter().all(|(a, b0)| rhs.0.iter().any(|(a1, b1)| a1 == a && b0 <= b1));
    let backward = rhs.0.iter().all(|(a, b1)| lhs.0.iter().any(|(a0, b0)| a0 == a && b0 <= b1));
    forward && backward
}

/// Finitely branching labelled transition systems, `F = P_f(A × −)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Powerset {
    pub alphabet: Vec<Label>,
}

/// Largest alphabet for which `F2` is enumerated (`4^|A|` elements).
pub const MAX_ENUMERABLE_LABELS: usize = 8;

impl Functor for Powerset {
    type Successors = Vec<(Label, StateId)>;
    type Obs = LtsObs;

    fn observe(&self, succ: &Self::Successors, p: &Predicate) -> LtsObs {
        LtsObs(succ.iter().map(|(a, y)| (a.clone(), p.contains(*y))).collect())
    }

    fn leq(&self, lhs: &LtsObs, rhs: &LtsObs) -> bool {
        leq(lhs, rhs)
    }

    fn support(&self, succ: &Self::Successors) -> Vec<StateId> {
        let set: BTreeSet<StateId> = succ.iter().map(|(_, y)| *y).collect();
        set.into_iter().collect()
    }

    /// Per label the component runs `∅, {0}, {0,1}, {1}` (a linear extension
    /// of `≤^F` on one label); labels combine lexicographically, first label
    /// most significant.
    fn enumerate_f2(&self) -> Option<Vec<LtsObs>> {
        if self.alphabet.len() > MAX_ENUMERABLE_LABELS {
            return None;
        }
        const COMPONENTS: [&[bool]; 4] = [&[], &[false], &[false, true], &[true]];
        let k = self.alphabet.len();
        let total = 4usize.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for code in 0..total {
            let mut pairs = Vec::new();
            for (pos, label) in self.alphabet.iter().enumerate() {
                let digit = code / 4usize.pow((k - 1 - pos) as u32) % 4;
                pairs.extend(COMPONENTS[digit].iter().map(|&b| (label.clone(), b)));
            }
            out.push(LtsObs::new(pairs));
        }
        Some(out)
    }

    fn parse_obs(&self, text: &str) -> Result<LtsObs> {
        match Observation::parse(text)? {
            Observation::Lts(o) => Ok(o),
            Observation::Prob(_) => Err(Error::FunctorMismatch("expected an LTS observation".into())),
        }
    }

    fn validate(&self, desc: &SystemDesc) -> Vec<Violation> {
        let mut out = Vec::new();
        for row in &desc.rows {
            match row {
                Row::Trans { src, label, weight: Some(_), .. } => out.push(Violation::WrongRow {
                    kind: Kind::Lts,
                    message: format!("weighted transition from `{src}` on `{label}`"),
                }),
                Row::Term { src, label } => out.push(Violation::WrongRow {
                    kind: Kind::Lts,
                    message: format!("termination row for `{src}` on `{label}`"),
                }),
                Row::Trans { .. } => {}
            }
        }
        out
    }
}
