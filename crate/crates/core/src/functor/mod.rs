//! Finite coalgebras for the built-in functors, the observations `Fp(α(x)) ∈ F2`
//! and the lifted order `≤^F` on them.
//!
//! Two functors ship with the crate: finitely branching labelled transition
//! systems `P_f(A × −)` ([`Powerset`]) and probabilistic systems with
//! termination `(D(−) + 1)^A` ([`Distribution`]). Both implement [`Functor`],
//! which is everything the refinement, game and logic layers consume.

mod distribution;
mod powerset;
mod system;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

pub use distribution::{Distribution, Outcome, ProbObs, ProbSuccessors};
pub use powerset::{LtsObs, Powerset};
pub use system::{validate, Coalgebra, Kind, Row, Structure, SystemDesc, Violation};

use crate::error::{Error, Result};
use crate::predicate::{Predicate, StateId};
use crate::rational;

/// A transition label from the system's finite alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Self {
        Label(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

/// Identifiers for states and labels: letters, digits, `_`, `-`, `.`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

/// Total order on state names: numeric names first, in numeric order, then
/// everything else lexicographically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// The plug-in seam for a branching type `F`.
///
/// A new functor supplies exactly these operations; partition refinement,
/// the game and formula synthesis are written against them.
pub trait Functor {
    /// `α(x)` for one state.
    type Successors;
    /// Elements of `F2`.
    type Obs: Clone + Eq + Ord + fmt::Display;

    /// `Fp(α(x))`.
    fn observe(&self, succ: &Self::Successors, p: &Predicate) -> Self::Obs;

    /// The lifted order `≤^F` on `F2`.
    fn leq(&self, lhs: &Self::Obs, rhs: &Self::Obs) -> bool;

    /// States that `observe` actually inspects: `Fp(α(x))` depends only on
    /// `p` restricted to this set.
    fn support(&self, succ: &Self::Successors) -> Vec<StateId>;

    /// All of `F2` in a fixed order, or `None` when `F2` is infinite.
    fn enumerate_f2(&self) -> Option<Vec<Self::Obs>>;

    fn parse_obs(&self, text: &str) -> Result<Self::Obs>;

    /// Functor-specific well-formedness checks on a system description.
    fn validate(&self, desc: &SystemDesc) -> Vec<Violation>;
}

/// An element of `F2` for one of the built-in functors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Observation {
    Lts(LtsObs),
    Prob(ProbObs),
}

impl Observation {
    /// `self ≤^F other`.
    pub fn leq(&self, other: &Observation) -> Result<bool> {
        match (self, other) {
            (Observation::Lts(a), Observation::Lts(b)) => Ok(powerset::leq(a, b)),
            (Observation::Prob(a), Observation::Prob(b)) => {
                if !a.same_domain(b) {
                    return Err(Error::AlphabetMismatch);
                }
                Ok(distribution::leq(a, b))
            }
            _ => Err(Error::FunctorMismatch("cannot compare LTS and probabilistic observations".into())),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Observation::Lts(_) => Kind::Lts,
            Observation::Prob(_) => Kind::Pts,
        }
    }

    /// Parses the printed form: `{(a,0),(b,1)}` or `<a:1, b:4/5, c:*>`.
    pub fn parse(text: &str) -> Result<Observation> {
        let mut p = crate::logic::Cursor::new(text);
        let obs = parse_observation(&mut p)?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input after observation"));
        }
        Ok(obs)
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Lts(o) => o.fmt(f),
            Observation::Prob(o) => o.fmt(f),
        }
    }
}

/// Shared by the observation and formula parsers.
pub(crate) fn parse_observation(p: &mut crate::logic::Cursor<'_>) -> Result<Observation> {
    p.skip_ws();
    match p.peek() {
        Some('{') => {
            p.bump();
            let mut pairs = Vec::new();
            p.skip_ws();
            if p.eat('}') {
                return Ok(Observation::Lts(LtsObs::new(pairs)));
            }
            loop {
                p.expect('(')?;
                let label = p.identifier()?;
                p.expect(',')?;
                p.skip_ws();
                let bit = match p.bump() {
                    Some('0') => false,
                    Some('1') => true,
                    _ => return Err(p.error("expected bit 0 or 1")),
                };
                p.expect(')')?;
                pairs.push((Label::new(&label), bit));
                p.skip_ws();
                if p.eat('}') {
                    break;
                }
                p.expect(',')?;
            }
            Ok(Observation::Lts(LtsObs::new(pairs)))
        }
        Some('<') => {
            p.bump();
            let mut entries = Vec::new();
            p.skip_ws();
            if p.eat('>') {
                return Ok(Observation::Prob(ProbObs::new(entries)));
            }
            loop {
                let label = p.identifier()?;
                p.expect(':')?;
                p.skip_ws();
                let outcome = if p.eat('*') {
                    Outcome::Terminate
                } else {
                    let start = p.position();
                    let text = p.take_while(|c| c.is_ascii_digit() || c == '/' || c == '.');
                    let q = rational::parse(text).map_err(|m| Error::Parse { position: start, message: m })?;
                    if !rational::in_unit_interval(&q) {
                        return Err(Error::Parse { position: start, message: format!("{text} is outside [0,1]") });
                    }
                    Outcome::Mass(q)
                };
                if entries.iter().any(|(l, _): &(Label, Outcome)| l.as_str() == label) {
                    return Err(p.error(&format!("label `{label}` appears twice")));
                }
                entries.push((Label::new(&label), outcome));
                p.skip_ws();
                if p.eat('>') {
                    break;
                }
                p.expect(',')?;
            }
            Ok(Observation::Prob(ProbObs::new(entries)))
        }
        _ => Err(p.error("expected observation `{...}` or `<...>`")),
    }
}
