//! Interior and closure of definable sets, expressed as formulas and
//! eliminated.

use std::collections::BTreeMap;

use super::completion::Completion;
use super::decide::{decide, resolve_ground};
use super::eliminate::{elim_quantifiers, elim_quantifiers_in};
use crate::error::{Error, Result};
use crate::logic::{canonical, fresh_var, Atom, Formula, LinearTerm, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopoMode {
    Interior,
    Closure,
    IsOpen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopoOutput {
    Formula(Formula),
    Verdict(bool),
}

fn lt(a: &Var, b: &Var) -> Formula {
    Atom::less(&LinearTerm::var(a.clone()), &LinearTerm::var(b.clone())).into()
}

fn require_qf(f: &Formula) -> Result<()> {
    if f.is_quantifier_free() {
        Ok(())
    } else {
        Err(Error::NotQuantifierFree)
    }
}

/// `∃l̄ū (l̄ < x̄ < ū ∧ ∀ȳ (l̄ < ȳ < ū → f(ȳ)))`
fn interior_formula(f: &Formula, vars: &[Var]) -> Result<Formula> {
    require_qf(f)?;
    let mut used = f.all_vars();
    used.extend(vars.iter().cloned());
    let mut ls = Vec::new();
    let mut us = Vec::new();
    let mut ys = Vec::new();
    let mut rename = BTreeMap::new();
    let mut boxed = Vec::new();
    let mut inner_box = Vec::new();
    for x in vars {
        let l = fresh_var("l", &mut used);
        let u = fresh_var("u", &mut used);
        let y = fresh_var("y", &mut used);
        boxed.push(lt(&l, x));
        boxed.push(lt(x, &u));
        inner_box.push(lt(&l, &y));
        inner_box.push(lt(&y, &u));
        rename.insert(x.clone(), y.clone());
        ls.push(l);
        us.push(u);
        ys.push(y);
    }
    let shifted = f.rename_all(&rename);
    let all_inside = Formula::forall(ys, Formula::implies(Formula::And(inner_box), shifted));
    boxed.push(all_inside);
    let bounds: Vec<Var> = ls.into_iter().chain(us).collect();
    Ok(Formula::exists(bounds, Formula::And(boxed)))
}

/// Interior of the set defined by `f` in the coordinates `vars`; other free
/// variables are parameters.
pub fn interior(f: &Formula, vars: &[Var]) -> Result<Formula> {
    Ok(elim_quantifiers(&interior_formula(f, vars)?)?.formula)
}

pub fn closure(f: &Formula, vars: &[Var]) -> Result<Formula> {
    require_qf(f)?;
    let inner = interior(&Formula::not(f.clone()), vars)?;
    Ok(canonical(&Formula::not(inner)))
}

/// [`interior`] with the ground atoms decided by `c`.
pub fn interior_in(f: &Formula, vars: &[Var], c: &Completion) -> Result<Formula> {
    Ok(elim_quantifiers_in(&interior_formula(f, vars)?, c)?.formula)
}

pub fn closure_in(f: &Formula, vars: &[Var], c: &Completion) -> Result<Formula> {
    require_qf(f)?;
    let inner = interior_in(&Formula::not(f.clone()), vars, c)?;
    Ok(canonical(&resolve_ground(&Formula::not(inner), c)))
}

/// Whether `f` defines an open set for every value of its parameters.
pub fn is_open(f: &Formula, vars: &[Var], c: &Completion) -> Result<bool> {
    let i = interior_in(f, vars, c)?;
    let free: Vec<Var> = f.free_vars().into_iter().chain(vars.iter().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    decide(&Formula::forall(free, Formula::iff(f.clone(), i)), c)
}

/// [`interior_in`], [`closure_in`] or [`is_open`] over all free variables
/// of `f`.
pub fn topo(f: &Formula, mode: TopoMode, c: &Completion) -> Result<TopoOutput> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    Ok(match mode {
        TopoMode::Interior => TopoOutput::Formula(interior_in(f, &vars, c)?),
        TopoMode::Closure => TopoOutput::Formula(closure_in(f, &vars, c)?),
        TopoMode::IsOpen => TopoOutput::Verdict(is_open(f, &vars, c)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn topo_examples() {
        let c = Completion::GermPosInf;
        assert_eq!(topo(&p("(> (lam t x) 0)"), TopoMode::Interior, &c).unwrap(), TopoOutput::Formula(Formula::False));
        assert_eq!(topo(&p("(> x 0)"), TopoMode::Interior, &c).unwrap(), TopoOutput::Formula(canonical(&p("(> x 0)"))));
        assert_eq!(topo(&p("(> (lam t x) 0)"), TopoMode::Closure, &c).unwrap(), TopoOutput::Formula(Formula::True));
        assert_eq!(topo(&p("(> x 0)"), TopoMode::IsOpen, &c).unwrap(), TopoOutput::Verdict(true));
        assert_eq!(topo(&p("(>= x 0)"), TopoMode::IsOpen, &c).unwrap(), TopoOutput::Verdict(false));
    }
}
