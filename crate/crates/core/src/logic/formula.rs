use std::fmt;

use super::cursor::Cursor;
use crate::error::{Error, Result};
use crate::functor::{parse_observation, Label, Observation};
use crate::rational::{self, Rational};

/// The fixed modalities for the built-in functors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Named {
    /// `□_a`: every `a`-successor satisfies the body.
    Box(Label),
    /// `◇_a`: some `a`-successor satisfies the body.
    Dia(Label),
    /// The `a`-distribution gives the body mass at least `q`.
    AtLeast(Label, Rational),
    /// The system terminates on `a`.
    IsTerminate(Label),
}

impl Named {
    pub fn label(&self) -> &Label {
        match self {
            Named::Box(a) | Named::Dia(a) | Named::AtLeast(a, _) | Named::IsTerminate(a) => a,
        }
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::Box(a) => write!(f, "box {a}"),
            Named::Dia(a) => write!(f, "dia {a}"),
            Named::AtLeast(a, q) => write!(f, "{a}>={}", rational::format(q)),
            Named::IsTerminate(a) => write!(f, "{a}=*"),
        }
    }
}

/// A map `2 → 2` precomposed with a named modality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pre {
    Id,
    One,
    Zero,
    Neg,
}

impl Pre {
    pub const ALL: [Pre; 4] = [Pre::Id, Pre::One, Pre::Zero, Pre::Neg];

    pub fn apply(self, b: bool) -> bool {
        match self {
            Pre::Id => b,
            Pre::One => true,
            Pre::Zero => false,
            Pre::Neg => !b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    /// `[↑v]`: true on observations above `v`.
    Cone(Observation),
    Named(Named),
    /// `λ ∘ F pre`.
    Closed(Named, Pre),
}

impl From<Named> for Modality {
    fn from(n: Named) -> Self {
        Modality::Named(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// The empty conjunction is `tt`.
    Conj(Vec<Formula>),
    Disj(Vec<Formula>),
    Neg(Box<Formula>),
    Modal(Modality, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Formula {
        Formula::Conj(Vec::new())
    }

    pub fn ff() -> Formula {
        Formula::neg(Formula::tt())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn modal(m: impl Into<Modality>, body: Formula) -> Formula {
        Formula::Modal(m.into(), Box::new(body))
    }

    /// Conjunction; a single conjunct stands for itself.
    pub fn conj(mut parts: Vec<Formula>) -> Formula {
        if parts.len() == 1 {
            parts.pop().expect("one element")
        } else {
            Formula::Conj(parts)
        }
    }

    /// Disjunction; a single disjunct stands for itself, none is `ff`.
    pub fn disj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::ff(),
            1 => parts.pop().expect("one element"),
            _ => Formula::Disj(parts),
        }
    }

    pub fn is_tt(&self) -> bool {
        matches!(self, Formula::Conj(v) if v.is_empty())
    }

    /// Nesting depth of modalities.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Conj(v) | Formula::Disj(v) => v.iter().map(Formula::modal_depth).max().unwrap_or(0),
            Formula::Neg(f) => f.modal_depth(),
            Formula::Modal(_, f) => 1 + f.modal_depth(),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Conj(v) | Formula::Disj(v) => 1 + v.iter().map(Formula::size).sum::<usize>(),
            Formula::Neg(f) | Formula::Modal(_, f) => 1 + f.size(),
        }
    }

    /// The form the parser returns for this formula's printed text: single
    /// conjuncts and disjuncts unwrapped, `Closed` modalities rewritten to
    /// their base modality.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Conj(v) => Formula::conj(v.iter().map(Formula::normalize).collect()),
            Formula::Disj(v) => Formula::disj(v.iter().map(Formula::normalize).collect()),
            Formula::Neg(f) => Formula::neg(f.normalize()),
            Formula::Modal(Modality::Closed(n, pre), f) => {
                let body = match pre {
                    Pre::Id => f.normalize(),
                    Pre::One => Formula::tt(),
                    Pre::Zero => Formula::ff(),
                    Pre::Neg => Formula::neg(f.normalize()),
                };
                Formula::modal(n.clone(), body)
            }
            Formula::Modal(m, f) => Formula::Modal(m.clone(), Box::new(f.normalize())),
        }
    }

    pub fn parse(text: &str) -> Result<Formula> {
        let mut p = Cursor::new(text);
        let f = parse_formula(&mut p)?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input after formula"));
        }
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Conj(v) if v.is_empty() => f.write_str("tt"),
            Formula::Neg(inner) if inner.is_tt() => f.write_str("ff"),
            Formula::Conj(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Formula::Disj(v) if v.is_empty() => f.write_str("ff"),
            Formula::Disj(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Formula::Conj(v) => write_list(f, v, " & "),
            Formula::Disj(v) => write_list(f, v, " | "),
            Formula::Neg(inner) => write!(f, "!({inner})"),
            Formula::Modal(Modality::Cone(v), body) => write!(f, "[^{v}]{body}"),
            Formula::Modal(Modality::Named(n), body) => write!(f, "[{n}]{body}"),
            Formula::Modal(Modality::Closed(n, pre), body) => match pre {
                Pre::Id => write!(f, "[{n}]{body}"),
                Pre::One => write!(f, "[{n}]tt"),
                Pre::Zero => write!(f, "[{n}]ff"),
                Pre::Neg => write!(f, "[{n}]!({body})"),
            },
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, v: &[Formula], sep: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

fn parse_formula(p: &mut Cursor<'_>) -> Result<Formula> {
    p.skip_ws();
    match p.peek() {
        Some('!') => {
            p.bump();
            p.expect('(')?;
            let inner = parse_formula(p)?;
            p.expect(')')?;
            Ok(Formula::neg(inner))
        }
        Some('(') => {
            p.bump();
            let first = parse_formula(p)?;
            if p.eat(')') {
                return Ok(first);
            }
            let op = if p.eat('&') {
                '&'
            } else if p.eat('|') {
                '|'
            } else {
                return Err(p.error("expected `&`, `|` or `)`"));
            };
            let mut parts = vec![first, parse_formula(p)?];
            loop {
                if p.eat(')') {
                    break;
                }
                if !p.eat(op) {
                    return Err(p.error(&format!("expected `{op}` or `)`; mixing `&` and `|` needs parentheses")));
                }
                parts.push(parse_formula(p)?);
            }
            Ok(if op == '&' { Formula::Conj(parts) } else { Formula::Disj(parts) })
        }
        Some('[') => {
            p.bump();
            let m = parse_modality(p)?;
            p.expect(']')?;
            Ok(Formula::modal(m, parse_formula(p)?))
        }
        _ => {
            let start = p.position();
            match p.identifier().ok().as_deref() {
                Some("tt") => Ok(Formula::tt()),
                Some("ff") => Ok(Formula::ff()),
                _ => Err(Error::Parse {
                    position: start,
                    message: "expected `tt`, `ff`, `!(`, `(` or `[`".into(),
                }),
            }
        }
    }
}

fn parse_modality(p: &mut Cursor<'_>) -> Result<Modality> {
    if p.eat('^') {
        return Ok(Modality::Cone(parse_observation(p)?));
    }
    let word = p.identifier()?;
    if p.eat_str(">=") {
        p.skip_ws();
        let start = p.position();
        let text = p.take_while(|c| c.is_ascii_digit() || c == '/' || c == '.');
        let q = rational::parse(text).map_err(|m| Error::Parse { position: start, message: m })?;
        if !rational::in_unit_interval(&q) {
            return Err(Error::Parse { position: start, message: format!("threshold {text} is outside [0,1]") });
        }
        return Ok(Named::AtLeast(Label::new(&word), q).into());
    }
    if p.eat('=') {
        p.expect('*')?;
        return Ok(Named::IsTerminate(Label::new(&word)).into());
    }
    match word.as_str() {
        "box" => Ok(Named::Box(Label::new(&p.identifier()?)).into()),
        "dia" => Ok(Named::Dia(Label::new(&p.identifier()?)).into()),
        _ => Err(p.error(&format!("unknown modality `{word}`"))),
    }
}
