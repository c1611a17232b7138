use super::formula::{Formula, Modality, Named};
use crate::error::{Error, Result};
use crate::functor::{Coalgebra, Kind, Label, Observation, Outcome};
use crate::predicate::{Predicate, StateId};

/// The predicate lifting of `m` applied to `v ∈ F2`.
pub fn eval_modality(m: &Modality, v: &Observation) -> Result<bool> {
    match m {
        Modality::Cone(w) => w.leq(v),
        Modality::Named(n) => eval_named(n, v),
        Modality::Closed(n, pre) => {
            let mapped = match v {
                Observation::Lts(o) => Observation::Lts(o.map_bits(|b| pre.apply(b))),
                Observation::Prob(o) => Observation::Prob(o.map_bits(|b| pre.apply(b))),
            };
            eval_named(n, &mapped)
        }
    }
}

fn eval_named(n: &Named, v: &Observation) -> Result<bool> {
    match (n, v) {
        (Named::Box(a), Observation::Lts(o)) => Ok(!o.contains(a, false)),
        (Named::Dia(a), Observation::Lts(o)) => Ok(o.contains(a, true)),
        (Named::AtLeast(a, q), Observation::Prob(o)) => match o.get(a) {
            Some(Outcome::Mass(m)) => Ok(m >= q),
            Some(Outcome::Terminate) => Ok(false),
            None => Err(Error::UnknownLabel(a.to_string())),
        },
        (Named::IsTerminate(a), Observation::Prob(o)) => match o.get(a) {
            Some(out) => Ok(out.is_terminate()),
            None => Err(Error::UnknownLabel(a.to_string())),
        },
        (n, v) => Err(Error::FunctorMismatch(format!("modality `{n}` does not apply to {} observations", v.kind()))),
    }
}

/// Checks that every modality of `f` fits `c`'s functor and alphabet.
pub fn check_formula(c: &Coalgebra, f: &Formula) -> Result<()> {
    match f {
        Formula::Conj(v) | Formula::Disj(v) => v.iter().try_for_each(|g| check_formula(c, g)),
        Formula::Neg(g) => check_formula(c, g),
        Formula::Modal(m, g) => {
            check_modality(c, m)?;
            check_formula(c, g)
        }
    }
}

fn check_modality(c: &Coalgebra, m: &Modality) -> Result<()> {
    let known = |a: &Label| {
        if c.alphabet().contains(a) {
            Ok(())
        } else {
            Err(Error::UnknownLabel(a.to_string()))
        }
    };
    match m {
        Modality::Cone(Observation::Lts(o)) => {
            if c.kind() != Kind::Lts {
                return Err(Error::FunctorMismatch("LTS cone in a probabilistic formula".into()));
            }
            o.iter().try_for_each(|(a, _)| known(a))
        }
        Modality::Cone(Observation::Prob(o)) => {
            if c.kind() != Kind::Pts {
                return Err(Error::FunctorMismatch("probabilistic cone in an LTS formula".into()));
            }
            if !o.labels().eq(c.alphabet().iter()) {
                return Err(Error::AlphabetMismatch);
            }
            Ok(())
        }
        Modality::Named(n) | Modality::Closed(n, _) => {
            let expected = match n {
                Named::Box(_) | Named::Dia(_) => Kind::Lts,
                Named::AtLeast(..) | Named::IsTerminate(_) => Kind::Pts,
            };
            if expected != c.kind() {
                return Err(Error::FunctorMismatch(format!("modality `{n}` needs a {expected} system")));
            }
            known(n.label())
        }
    }
}

/// `⟦f⟧` as a predicate on `c`'s states.
pub fn eval(c: &Coalgebra, f: &Formula) -> Result<Predicate> {
    check_formula(c, f)?;
    Ok(eval_checked(c, f))
}

fn eval_checked(c: &Coalgebra, f: &Formula) -> Predicate {
    match f {
        Formula::Conj(v) => v.iter().fold(c.full(), |acc, g| acc.intersection(&eval_checked(c, g))),
        Formula::Disj(v) => v.iter().fold(Predicate::empty(c.len()), |acc, g| acc.union(&eval_checked(c, g))),
        Formula::Neg(g) => eval_checked(c, g).complement(),
        Formula::Modal(m, g) => {
            let inner = eval_checked(c, g);
            Predicate::from_states(
                c.len(),
                c.states().filter(|&x| eval_modality(m, &c.observe(x, &inner)).expect("modality checked against c")),
            )
        }
    }
}

/// Whether state `x` satisfies `f`.
pub fn satisfies(c: &Coalgebra, x: StateId, f: &Formula) -> Result<bool> {
    Ok(eval(c, f)?.contains(x))
}
