//! Rewriting cone modalities into a fixed modality set.

use std::collections::HashSet;

use super::eval::eval_modality;
use super::formula::{Formula, Modality, Named, Pre};
use crate::error::{Error, Result};
use crate::functor::{Coalgebra, Kind, Label, Observation, Outcome};

/// Target modality set for [`recode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recode {
    /// `□_a` and `◇_a` for every label (LTS only).
    BoxDia,
    /// `[a>=q]` and `[a=*]` (probabilistic only).
    Thresholds,
}

impl std::str::FromStr for Recode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box-dia" => Ok(Recode::BoxDia),
            "thresholds" => Ok(Recode::Thresholds),
            other => Err(Error::RecodeUnsupported(format!("unknown target `{other}` (expected box-dia or thresholds)"))),
        }
    }
}

/// `[box a]` for each label, then `[dia a]` for each label.
pub fn box_dia(alphabet: &[Label]) -> Vec<Named> {
    let boxes = alphabet.iter().map(|a| Named::Box(a.clone()));
    boxes.chain(alphabet.iter().map(|a| Named::Dia(a.clone()))).collect()
}

/// `{λ, λ∘F one, λ∘F zero, λ∘F neg | λ ∈ Λ}`. With `f2` given, modalities
/// that agree on all of `F2` with an earlier one are dropped.
pub fn closure(lambda: &[Named], f2: Option<&[Observation]>) -> Result<Vec<Modality>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for n in lambda {
        for pre in Pre::ALL {
            let m = if pre == Pre::Id { Modality::Named(n.clone()) } else { Modality::Closed(n.clone(), pre) };
            if let Some(f2) = f2 {
                let profile: Vec<bool> = f2.iter().map(|u| eval_modality(&m, u)).collect::<Result<_>>()?;
                if !seen.insert(profile) {
                    continue;
                }
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// Whether every two distinct elements of `f2` are told apart by some modality.
pub fn is_strongly_separating(lambda: &[Modality], f2: &[Observation]) -> Result<bool> {
    let mut seen = HashSet::new();
    for u in f2 {
        let profile: Vec<bool> = lambda.iter().map(|m| eval_modality(m, u)).collect::<Result<_>>()?;
        if !seen.insert(profile) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces every `[↑v]ψ` by the disjunction over `u ≥ v` of the
/// conjunctions characterizing `u` under `lambda`. `lambda` must be strongly
/// separating on `f2`.
pub fn recode_finite(f: &Formula, lambda: &[Modality], f2: &[Observation]) -> Result<Formula> {
    if !is_strongly_separating(lambda, f2)? {
        return Err(Error::NotStronglySeparating);
    }
    rewrite(f, &mut |v, body| {
        let mut disjuncts = Vec::new();
        for u in f2 {
            if !v.leq(u)? {
                continue;
            }
            let mut parts = Vec::with_capacity(lambda.len());
            for m in lambda {
                let atom = Formula::modal(m.clone(), body.clone());
                parts.push(if eval_modality(m, u)? { atom } else { Formula::neg(atom) });
            }
            disjuncts.push(Formula::conj(parts));
        }
        Ok(Formula::disj(disjuncts))
    })
}

/// Replaces every probabilistic `[↑v]ψ` by `⋀_a [a>=v(a)]ψ` (or `[a=*]ψ`
/// where `v(a)` terminates).
pub fn recode_prob(f: &Formula) -> Result<Formula> {
    rewrite(f, &mut |v, body| match v {
        Observation::Prob(o) => Ok(Formula::conj(
            o.iter()
                .map(|(a, out)| {
                    let n = match out {
                        Outcome::Mass(q) => Named::AtLeast(a.clone(), q.clone()),
                        Outcome::Terminate => Named::IsTerminate(a.clone()),
                    };
                    Formula::modal(n, body.clone())
                })
                .collect(),
        )),
        Observation::Lts(_) => Err(Error::RecodeUnsupported("threshold recoding needs a probabilistic formula".into())),
    })
}

/// Recodes the cones of `f` for `c`'s functor.
pub fn recode(c: &Coalgebra, f: &Formula, target: Recode) -> Result<Formula> {
    match (target, c.kind()) {
        (Recode::BoxDia, Kind::Lts) => {
            let f2 = c.enumerate_f2()?;
            let lambda: Vec<Modality> = box_dia(c.alphabet()).into_iter().map(Modality::Named).collect();
            recode_finite(f, &lambda, &f2)
        }
        (Recode::Thresholds, Kind::Pts) => recode_prob(f),
        (Recode::BoxDia, _) => Err(Error::RecodeUnsupported("box-dia recoding needs an lts system".into())),
        (Recode::Thresholds, _) => Err(Error::RecodeUnsupported("threshold recoding needs a pts system".into())),
    }
}

/// Innermost-first rewrite of cone modalities; other connectives are kept.
fn rewrite(f: &Formula, cone: &mut dyn FnMut(&Observation, &Formula) -> Result<Formula>) -> Result<Formula> {
    Ok(match f {
        Formula::Conj(v) => Formula::Conj(v.iter().map(|g| rewrite(g, cone)).collect::<Result<_>>()?),
        Formula::Disj(v) => Formula::Disj(v.iter().map(|g| rewrite(g, cone)).collect::<Result<_>>()?),
        Formula::Neg(g) => Formula::neg(rewrite(g, cone)?),
        Formula::Modal(Modality::Cone(v), g) => {
            let body = rewrite(g, cone)?;
            cone(v, &body)?
        }
        Formula::Modal(m, g) => Formula::Modal(m.clone(), Box::new(rewrite(g, cone)?)),
    })
}
