use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::{is_identifier, natural_cmp, Distribution, Functor, Label, Observation, Powerset, ProbSuccessors};
use crate::error::{Error, Result};
use crate::predicate::{Predicate, StateId};
use crate::rational::Rational;

/// Which built-in functor a system is a coalgebra for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `P_f(A × −)`
    Lts,
    /// `(D(−) + 1)^A`
    Pts,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Lts => "lts",
            Kind::Pts => "pts",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One transition record, by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Row {
    Trans { src: String, label: String, dst: String, weight: Option<Rational> },
    Term { src: String, label: String },
}

/// A system as written down: names only, not yet checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDesc {
    pub kind: Kind,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingState { state: String },
    UnknownLabel { label: String },
    DuplicateState { state: String },
    DuplicateLabel { label: String },
    BadIdentifier { name: String },
    WrongRow { kind: Kind, message: String },
    OutOfRange { src: String, label: String, dst: String, weight: String },
    DuplicateTransition { src: String, label: String, dst: String },
    TerminationConflict { src: String, label: String },
    BadSum { src: String, label: String, sum: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingState { state } => write!(f, "dangling state `{state}` (not declared)"),
            Violation::UnknownLabel { label } => write!(f, "label `{label}` is not in the alphabet"),
            Violation::DuplicateState { state } => write!(f, "state `{state}` declared twice"),
            Violation::DuplicateLabel { label } => write!(f, "label `{label}` listed twice"),
            Violation::BadIdentifier { name } => write!(f, "`{name}` is not a valid identifier"),
            Violation::WrongRow { kind, message } => write!(f, "not allowed in a {kind} system: {message}"),
            Violation::OutOfRange { src, label, dst, weight } => {
                write!(f, "probability {weight} of `{src}` -{label}-> `{dst}` is outside [0,1]")
            }
            Violation::DuplicateTransition { src, label, dst } => {
                write!(f, "transition `{src}` -{label}-> `{dst}` listed twice")
            }
            Violation::TerminationConflict { src, label } => {
                write!(f, "`{src}` both terminates and moves on `{label}`")
            }
            Violation::BadSum { src, label, sum } => {
                write!(f, "sum ≠ 1: distribution of `{src}` on `{label}` sums to {sum}")
            }
        }
    }
}

/// Every invariant violation of `desc`; empty iff the system is well formed.
pub fn validate(desc: &SystemDesc) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut states = BTreeSet::new();
    for s in &desc.states {
        if !is_identifier(s) {
            out.push(Violation::BadIdentifier { name: s.clone() });
        }
        if !states.insert(s.as_str()) {
            out.push(Violation::DuplicateState { state: s.clone() });
        }
    }
    let mut labels = BTreeSet::new();
    for a in &desc.alphabet {
        if !is_identifier(a) {
            out.push(Violation::BadIdentifier { name: a.clone() });
        }
        if !labels.insert(a.as_str()) {
            out.push(Violation::DuplicateLabel { label: a.clone() });
        }
    }
    let mut dangling = BTreeSet::new();
    let mut unknown = BTreeSet::new();
    for row in &desc.rows {
        let (src, label, dst) = match row {
            Row::Trans { src, label, dst, .. } => (src, label, Some(dst)),
            Row::Term { src, label } => (src, label, None),
        };
        for s in std::iter::once(src).chain(dst) {
            if !states.contains(s.as_str()) && dangling.insert(s.clone()) {
                out.push(Violation::DanglingState { state: s.clone() });
            }
        }
        if !labels.contains(label.as_str()) && unknown.insert(label.clone()) {
            out.push(Violation::UnknownLabel { label: label.clone() });
        }
    }
    let alphabet = sorted_labels(&desc.alphabet);
    out.extend(match desc.kind {
        Kind::Lts => Powerset { alphabet }.validate(desc),
        Kind::Pts => Distribution { alphabet }.validate(desc),
    });
    out
}

fn sorted_labels(names: &[String]) -> Vec<Label> {
    let set: BTreeSet<&str> = names.iter().map(String::as_str).collect();
    set.into_iter().map(Label::new).collect()
}

/// `α: X → FX` per functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Lts { functor: Powerset, succ: Vec<Vec<(Label, StateId)>> },
    Pts { functor: Distribution, succ: Vec<ProbSuccessors> },
}

/// A validated finite coalgebra.
///
/// States are kept in their canonical order (see [`natural_cmp`]) and the
/// alphabet sorted, so [`StateId`] order is the total order used for every
/// deterministic choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalgebra {
    states: Vec<String>,
    alphabet: Vec<Label>,
    structure: Structure,
    index: HashMap<String, StateId>,
}

impl Coalgebra {
    pub fn from_desc(desc: &SystemDesc) -> Result<Self> {
        let violations = validate(desc);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let mut states = desc.states.clone();
        states.sort_by(|a, b| natural_cmp(a, b));
        let index: HashMap<String, StateId> =
            states.iter().enumerate().map(|(i, s)| (s.clone(), StateId(i))).collect();
        let alphabet = sorted_labels(&desc.alphabet);
        let label_pos: HashMap<&str, usize> = alphabet.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let n = states.len();
        let structure = match desc.kind {
            Kind::Lts => {
                let mut succ: Vec<BTreeSet<(Label, StateId)>> = vec![BTreeSet::new(); n];
                for row in &desc.rows {
                    if let Row::Trans { src, label, dst, .. } = row {
                        succ[index[src].0].insert((alphabet[label_pos[label.as_str()]].clone(), index[dst]));
                    }
                }
                Structure::Lts {
                    functor: Powerset { alphabet: alphabet.clone() },
                    succ: succ.into_iter().map(|s| s.into_iter().collect()).collect(),
                }
            }
            Kind::Pts => {
                let mut dists: Vec<Vec<BTreeMap<StateId, Rational>>> = vec![vec![BTreeMap::new(); alphabet.len()]; n];
                for row in &desc.rows {
                    if let Row::Trans { src, label, dst, weight: Some(w) } = row {
                        dists[index[src].0][label_pos[label.as_str()]].insert(index[dst], w.clone());
                    }
                }
                // A (state, label) without any transition row terminates.
                let succ = dists
                    .into_iter()
                    .map(|per_label| {
                        per_label
                            .into_iter()
                            .map(|d| if d.is_empty() { None } else { Some(d.into_iter().collect()) })
                            .collect()
                    })
                    .collect();
                Structure::Pts { functor: Distribution { alphabet: alphabet.clone() }, succ }
            }
        };
        Ok(Coalgebra { states, alphabet, structure, index })
    }

    /// The description this coalgebra was built from, in canonical row order.
    pub fn to_desc(&self) -> SystemDesc {
        let mut rows = Vec::new();
        match &self.structure {
            Structure::Lts { succ, .. } => {
                for (x, s) in succ.iter().enumerate() {
                    for (a, y) in s {
                        rows.push(Row::Trans {
                            src: self.states[x].clone(),
                            label: a.to_string(),
                            dst: self.states[y.0].clone(),
                            weight: None,
                        });
                    }
                }
            }
            Structure::Pts { succ, .. } => {
                for (x, per_label) in succ.iter().enumerate() {
                    for (a, d) in self.alphabet.iter().zip(per_label) {
                        match d {
                            None => rows.push(Row::Term { src: self.states[x].clone(), label: a.to_string() }),
                            Some(d) => rows.extend(d.iter().map(|(y, w)| Row::Trans {
                                src: self.states[x].clone(),
                                label: a.to_string(),
                                dst: self.states[y.0].clone(),
                                weight: Some(w.clone()),
                            })),
                        }
                    }
                }
            }
        }
        SystemDesc {
            kind: self.kind(),
            alphabet: self.alphabet.iter().map(ToString::to_string).collect(),
            states: self.states.clone(),
            rows,
        }
    }

    pub fn kind(&self) -> Kind {
        match self.structure {
            Structure::Lts { .. } => Kind::Lts,
            Structure::Pts { .. } => Kind::Pts,
        }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn name(&self, x: StateId) -> &str {
        &self.states[x.0]
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn alphabet(&self) -> &[Label] {
        &self.alphabet
    }

    pub fn predicate<'a, I>(&self, names: I) -> Result<Predicate>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut p = Predicate::empty(self.len());
        for n in names {
            p.insert(self.state(n)?);
        }
        Ok(p)
    }

    pub fn predicate_names(&self, p: &Predicate) -> Vec<String> {
        p.iter().map(|x| self.name(x).to_string()).collect()
    }

    pub fn full(&self) -> Predicate {
        Predicate::full(self.len())
    }

    /// `Fp(α(x))`.
    pub fn observe(&self, x: StateId, p: &Predicate) -> Observation {
        match &self.structure {
            Structure::Lts { functor, succ } => Observation::Lts(functor.observe(&succ[x.0], p)),
            Structure::Pts { functor, succ } => Observation::Prob(functor.observe(&succ[x.0], p)),
        }
    }

    /// Checked variant of [`observe`](Self::observe) by state name.
    pub fn observe_named(&self, x: &str, p: &Predicate) -> Result<Observation> {
        Ok(self.observe(self.state(x)?, p))
    }

    pub fn support(&self, x: StateId) -> Vec<StateId> {
        match &self.structure {
            Structure::Lts { functor, succ } => functor.support(&succ[x.0]),
            Structure::Pts { functor, succ } => functor.support(&succ[x.0]),
        }
    }

    /// All of `F2`, for functors where it is finite.
    pub fn enumerate_f2(&self) -> Result<Vec<Observation>> {
        match &self.structure {
            Structure::Lts { functor, .. } => functor
                .enumerate_f2()
                .map(|v| v.into_iter().map(Observation::Lts).collect())
                .ok_or_else(|| Error::RecodeUnsupported(format!("alphabet of {} labels is too large to enumerate F2", self.alphabet.len()))),
            Structure::Pts { .. } => Err(Error::InfiniteF2),
        }
    }

    /// Labelled edges `(src, label, dst, probability)`; probability is `None`
    /// for LTS edges.
    pub fn edges(&self) -> Vec<(StateId, Label, StateId, Option<Rational>)> {
        match &self.structure {
            Structure::Lts { succ, .. } => succ
                .iter()
                .enumerate()
                .flat_map(|(x, s)| s.iter().map(move |(a, y)| (StateId(x), a.clone(), *y, None)))
                .collect(),
            Structure::Pts { succ, .. } => succ
                .iter()
                .enumerate()
                .flat_map(|(x, per_label)| {
                    self.alphabet.iter().zip(per_label).flat_map(move |(a, d)| {
                        d.iter().flatten().map(move |(y, w)| (StateId(x), a.clone(), *y, Some(w.clone())))
                    })
                })
                .collect(),
        }
    }

    /// Whether state `x` terminates on `label` (always false for LTSs).
    pub fn terminates(&self, x: StateId, label: &Label) -> bool {
        match &self.structure {
            Structure::Lts { .. } => false,
            Structure::Pts { succ, .. } => {
                self.alphabet.iter().position(|l| l == label).is_some_and(|i| succ[x.0][i].is_none())
            }
        }
    }
}
