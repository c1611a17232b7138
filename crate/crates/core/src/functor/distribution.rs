use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{Functor, Kind, Label, Observation, Row, SystemDesc, Violation};
use crate::error::{Error, Result};
use crate::predicate::{Predicate, StateId};
use crate::rational::{self, Rational};

/// One component of a probabilistic observation: mass in `[0,1]` or `•`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Mass(Rational),
    Terminate,
}

impl Outcome {
    pub fn is_terminate(&self) -> bool {
        matches!(self, Outcome::Terminate)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Mass(q) => f.write_str(&rational::format(q)),
            Outcome::Terminate => f.write_str("*"),
        }
    }
}

/// An element of `([0,1] + 1)^A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ProbObs(BTreeMap<Label, Outcome>);

impl ProbObs {
    pub fn new<I: IntoIterator<Item = (Label, Outcome)>>(entries: I) -> Self {
        ProbObs(entries.into_iter().collect())
    }

    pub fn get(&self, label: &Label) -> Option<&Outcome> {
        self.0.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Outcome)> {
        self.0.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.0.keys()
    }

    pub fn same_domain(&self, other: &ProbObs) -> bool {
        self.0.len() == other.0.len() && self.0.keys().zip(other.0.keys()).all(|(a, b)| a == b)
    }

    /// `Ff(self)` for `f: 2 -> 2`; the mass of `1` after relabelling.
    pub fn map_bits(&self, f: impl Fn(bool) -> bool) -> ProbObs {
        ProbObs(
            self.0
                .iter()
                .map(|(l, o)| {
                    let mapped = match o {
                        Outcome::Terminate => Outcome::Terminate,
                        Outcome::Mass(q) => {
                            let mut mass = Rational::zero();
                            if f(true) {
                                mass += q;
                            }
                            if f(false) {
                                mass += Rational::one() - q;
                            }
                            Outcome::Mass(mass)
                        }
                    };
                    (l.clone(), mapped)
                })
                .collect(),
        )
    }
}

impl fmt::Display for ProbObs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, (label, o)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{label}:{o}")?;
        }
        f.write_str(">")
    }
}

/// Componentwise; `•` only below `•`. Assumes equal domains.
pub(crate) fn leq(lhs: &ProbObs, rhs: &ProbObs) -> bool {
    lhs.0.len() == rhs.0.len()
        && lhs.0.iter().zip(rhs.0.iter()).all(|((la, a), (lb, b))| {
            la == lb
                && match (a, b) {
                    (Outcome::Terminate, Outcome::Terminate) => true,
                    (Outcome::Mass(x), Outcome::Mass(y)) => x <= y,
                    _ => false,
                }
        })
}

/// `α(x)`: per alphabet letter (in alphabet order) either termination
/// (`None`) or a finitely supported distribution.
pub type ProbSuccessors = Vec<Option<Vec<(StateId, Rational)>>>;

/// Probabilistic transition systems with termination, `F = (D(−) + 1)^A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub alphabet: Vec<Label>,
}

impl Functor for Distribution {
    type Successors = ProbSuccessors;
    type Obs = ProbObs;

    fn observe(&self, succ: &ProbSuccessors, p: &Predicate) -> ProbObs {
        ProbObs(
            self.alphabet
                .iter()
                .zip(succ)
                .map(|(label, dist)| {
                    let o = match dist {
                        None => Outcome::Terminate,
                        Some(d) => Outcome::Mass(
                            d.iter().filter(|(y, _)| p.contains(*y)).fold(Rational::zero(), |acc, (_, w)| acc + w),
                        ),
                    };
                    (label.clone(), o)
                })
                .collect(),
        )
    }

    fn leq(&self, lhs: &ProbObs, rhs: &ProbObs) -> bool {
        leq(lhs, rhs)
    }

    fn support(&self, succ: &ProbSuccessors) -> Vec<StateId> {
        let set: BTreeSet<StateId> =
            succ.iter().flatten().flat_map(|d| d.iter().filter(|(_, w)| !w.is_zero()).map(|(y, _)| *y)).collect();
        set.into_iter().collect()
    }

    fn enumerate_f2(&self) -> Option<Vec<ProbObs>> {
        None
    }

    fn parse_obs(&self, text: &str) -> Result<ProbObs> {
        match Observation::parse(text)? {
            Observation::Prob(o) if o.labels().eq(self.alphabet.iter()) => Ok(o),
            Observation::Prob(_) => Err(Error::AlphabetMismatch),
            Observation::Lts(_) => Err(Error::FunctorMismatch("expected a probabilistic observation".into())),
        }
    }

    fn validate(&self, desc: &SystemDesc) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut sums: BTreeMap<(&str, &str), Rational> = BTreeMap::new();
        let mut seen: BTreeSet<(&str, &str, &str)> = BTreeSet::new();
        let mut terminating: BTreeSet<(&str, &str)> = BTreeSet::new();
        for row in &desc.rows {
            match row {
                Row::Trans { src, label, dst, weight } => {
                    let Some(w) = weight else {
                        out.push(Violation::WrongRow {
                            kind: Kind::Pts,
                            message: format!("transition from `{src}` on `{label}` to `{dst}` has no probability"),
                        });
                        continue;
                    };
                    if !rational::in_unit_interval(w) {
                        out.push(Violation::OutOfRange {
                            src: src.clone(),
                            label: label.clone(),
                            dst: dst.clone(),
                            weight: rational::format(w),
                        });
                    }
                    if !seen.insert((src, label, dst)) {
                        out.push(Violation::DuplicateTransition {
                            src: src.clone(),
                            label: label.clone(),
                            dst: dst.clone(),
                        });
                    }
                    *sums.entry((src, label)).or_insert_with(Rational::zero) += w;
                }
                Row::Term { src, label } => {
                    terminating.insert((src, label));
                }
            }
        }
        for (&(src, label), sum) in &sums {
            if terminating.contains(&(src, label)) {
                out.push(Violation::TerminationConflict { src: src.to_string(), label: label.to_string() });
            }
            if !sum.is_one() {
                out.push(Violation::BadSum {
                    src: src.to_string(),
                    label: label.to_string(),
                    sum: rational::format(sum),
                });
            }
        }
        out
    }
}
