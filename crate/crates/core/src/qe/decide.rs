//! Deciding sentences under a completion.

use super::completion::{completion_sign, Completion, Sign};
use super::eliminate::{elim_quantifiers_in, QeStats};
use crate::error::{Error, Result};
use crate::logic::{eval_qf, Atom, Formula, Rel};

/// Truth of a variable-free atom `λ_q(1) ⋈ 0`.
pub fn ground_atom_truth(a: &Atom, c: &Completion) -> Option<bool> {
    if !a.lhs.is_ground() {
        return None;
    }
    let q = a.lhs.constant_part();
    Some(match a.rel {
        Rel::Eq => q.is_zero(),
        Rel::Ne => !q.is_zero(),
        Rel::Lt => completion_sign(c, q) == Sign::Neg,
    })
}

/// Replace every ground atom by its truth value under `c`.
pub fn resolve_ground(f: &Formula, c: &Completion) -> Formula {
    let r = |g: &Formula| resolve_ground(g, c);
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => match ground_atom_truth(a, c) {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => f.clone(),
        },
        Formula::Not(g) => Formula::not(r(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(r).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(r).collect()),
        Formula::Exists(vs, g) => Formula::exists(vs.clone(), r(g)),
        Formula::Forall(vs, g) => Formula::forall(vs.clone(), r(g)),
        Formula::ExistsInf(x, g) => Formula::exists_inf(x.clone(), r(g)),
    }
}

/// Evaluate a quantifier-free formula whose atoms are all variable-free.
pub fn eval_ground(f: &Formula, c: &Completion) -> Result<bool> {
    let mut stray = None;
    let v = eval_qf(f, &mut |a| match ground_atom_truth(a, c) {
        Some(b) => b,
        None => {
            stray.get_or_insert_with(|| a.lhs.vars().map(|x| x.name().to_string()).collect::<Vec<_>>());
            false
        }
    })?;
    match stray {
        Some(vars) => Err(Error::FreeVariables(vars)),
        None => Ok(v),
    }
}

pub fn decide(sentence: &Formula, c: &Completion) -> Result<bool> {
    decide_with_stats(sentence, c).map(|(b, _)| b)
}

pub fn decide_with_stats(sentence: &Formula, c: &Completion) -> Result<(bool, QeStats)> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(free.into_iter().map(|x| x.name().to_string()).collect()));
    }
    let r = elim_quantifiers_in(sentence, c)?;
    Ok((eval_ground(&r.formula, c)?, r.stats))
}
