//! Reference semantics for quantified formulas at model points.
//!
//! This path is deliberately separate from `qe`: inner quantifiers are
//! removed with the Motzkin alternative over extreme rays, and the
//! outermost quantifier is evaluated concretely with [`numeric_feasible`].

use std::collections::BTreeMap;

use num_traits::Zero;

use super::feasible::{extreme_rays, numeric_feasible, Feasibility, LinConstraint};
use super::session::{ModelElement, ModelSession};
use crate::error::{Error, Result};
use crate::logic::{dnf_clauses, nnf, simplify, Atom, Formula, LinearTerm, Rel, Var};
use crate::qfield::{q_basis, Rational, RationalFunction};

/// A literal conjunction split around `x`.
struct Split<'a> {
    pinned: Option<&'a Atom>,
    free: Vec<&'a Atom>,
    strict: Vec<&'a Atom>,
    avoid: Vec<&'a Atom>,
}

fn split<'a>(x: &Var, clause: &'a [Atom]) -> Split<'a> {
    let mut s = Split {
        pinned: None,
        free: Vec::new(),
        strict: Vec::new(),
        avoid: Vec::new(),
    };
    for a in clause {
        if !a.mentions(x) {
            s.free.push(a);
            continue;
        }
        match a.rel {
            Rel::Eq => {
                if s.pinned.is_none() {
                    s.pinned = Some(a);
                }
            }
            Rel::Lt => s.strict.push(a),
            Rel::Ne => s.avoid.push(a),
        }
    }
    s
}

/// `x` as fixed by `q·x + rest = 0`.
fn solved(x: &Var, eq: &Atom) -> LinearTerm {
    let q = eq.lhs.coeff(x);
    eq.lhs.without(x).scale(&q.inv().expect("nonzero").neg())
}

/// Component rows: coordinates of each `x`-coefficient over a Q-basis.
fn components(x: &Var, atoms: &[&Atom]) -> (Vec<Vec<Rational>>, usize) {
    let qs: Vec<RationalFunction> = atoms.iter().map(|a| a.lhs.coeff(x)).collect();
    let dec = q_basis(&qs);
    let k = dec.rank();
    (dec.matrix, k)
}

fn circuit_elim(x: &Var, clause: &[Atom], allow_pinned: bool) -> Formula {
    let s = split(x, clause);
    let mut out: Vec<Formula> = s.free.iter().map(|a| Formula::Atom((*a).clone())).collect();
    if let Some(eq) = s.pinned {
        if !allow_pinned {
            return Formula::False;
        }
        let r = solved(x, eq);
        out.extend(clause.iter().map(|a| Formula::Atom(Atom::new(a.lhs.substitute(x, &r), a.rel))));
        return simplify(&Formula::And(out));
    }
    if !s.strict.is_empty() {
        let (rows, k) = components(x, &s.strict);
        for y in extreme_rays(&rows, k) {
            let sum = y
                .iter()
                .zip(&s.strict)
                .filter(|(c, _)| !c.is_zero())
                .fold(LinearTerm::zero(), |acc, (c, a)| acc.add(&a.lhs.without(x).scale_q(c)));
            out.push(Atom::lt(sum).into());
        }
    }
    simplify(&Formula::And(out))
}

fn eliminate_one(x: &Var, body: &Formula, allow_pinned: bool) -> Result<Formula> {
    let clauses = dnf_clauses(body)?;
    let parts: Vec<Formula> = clauses.iter().map(|c| circuit_elim(x, c, allow_pinned)).collect();
    Ok(simplify(&Formula::Or(parts)))
}

/// Quantifier-free equivalent of `f` by the circuit route.
pub fn oracle_eliminate(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(oracle_eliminate(g)?),
        Formula::And(gs) => Formula::And(gs.iter().map(oracle_eliminate).collect::<Result<_>>()?),
        Formula::Or(gs) => Formula::Or(gs.iter().map(oracle_eliminate).collect::<Result<_>>()?),
        Formula::Exists(vs, g) => {
            let mut body = oracle_eliminate(g)?;
            for x in vs.iter().rev() {
                body = eliminate_one(x, &body, true)?;
            }
            body
        }
        Formula::Forall(vs, g) => {
            let mut body = Formula::not(oracle_eliminate(g)?);
            for x in vs.iter().rev() {
                body = eliminate_one(x, &body, true)?;
            }
            Formula::not(body)
        }
        Formula::ExistsInf(x, g) => eliminate_one(x, &oracle_eliminate(g)?, false)?,
    })
}

/// Rewrite `f` so that only one quantified variable per outermost binder
/// remains and every quantifier body is quantifier-free.
pub fn prepare(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(prepare(g)?),
        Formula::And(gs) => Formula::And(gs.iter().map(prepare).collect::<Result<_>>()?),
        Formula::Or(gs) => Formula::Or(gs.iter().map(prepare).collect::<Result<_>>()?),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) if vs.is_empty() => prepare(g)?,
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let is_exists = matches!(f, Formula::Exists(..));
            let mut body = oracle_eliminate(g)?;
            if !is_exists {
                body = Formula::not(body);
            }
            for x in vs[1..].iter().rev() {
                body = eliminate_one(x, &body, true)?;
            }
            let e = Formula::exists(vec![vs[0].clone()], nnf(&body));
            if is_exists {
                e
            } else {
                Formula::not(e)
            }
        }
        Formula::ExistsInf(x, g) => Formula::exists_inf(x.clone(), nnf(&oracle_eliminate(g)?)),
    })
}

/// Truth of `f` at `env` in the session model.
pub fn eval_formula(s: &mut ModelSession, f: &Formula, env: &BTreeMap<Var, ModelElement>) -> Result<bool> {
    eval_prepared(s, &prepare(f)?, env)
}

/// As [`eval_formula`] for output of [`prepare`].
pub fn eval_prepared(s: &mut ModelSession, f: &Formula, env: &BTreeMap<Var, ModelElement>) -> Result<bool> {
    if let Some(x) = f.free_vars().into_iter().find(|x| !env.contains_key(x)) {
        return Err(Error::UnboundVariable(x.name().to_string()));
    }
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => s.eval_formula(f, env),
        Formula::Not(g) => Ok(!eval_prepared(s, g, env)?),
        Formula::And(gs) => {
            for g in gs {
                if !eval_prepared(s, g, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_prepared(s, g, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists(vs, g) if vs.len() == 1 && g.is_quantifier_free() => concrete_exists(s, &vs[0], g, env, true),
        Formula::ExistsInf(x, g) if g.is_quantifier_free() => concrete_exists(s, x, g, env, false),
        _ => eval_prepared(s, &prepare(f)?, env),
    }
}

fn concrete_exists(
    s: &mut ModelSession,
    x: &Var,
    body: &Formula,
    env: &BTreeMap<Var, ModelElement>,
    allow_pinned: bool,
) -> Result<bool> {
    let mut search = Search {
        s,
        x,
        env,
        allow_pinned,
    };
    search.run(&mut Vec::new(), vec![nnf(body)])
}

/// Backtracking search over the NNF tree of the body: x-free literals are
/// decided on the spot, an equality pinning `x` ends the branch with a
/// direct evaluation, and branches whose strict part is infeasible are cut.
struct Search<'a, 'b> {
    s: &'a mut ModelSession,
    x: &'b Var,
    env: &'b BTreeMap<Var, ModelElement>,
    allow_pinned: bool,
}

impl Search<'_, '_> {
    fn run(&mut self, lits: &mut Vec<Atom>, mut todo: Vec<Formula>) -> Result<bool> {
        let Some(f) = todo.pop() else {
            return Ok(self.feasible(lits)? == Feasibility::Feasible);
        };
        match f {
            Formula::True => self.run(lits, todo),
            Formula::False => Ok(false),
            Formula::And(gs) => {
                todo.extend(gs.into_iter().rev());
                self.run(lits, todo)
            }
            Formula::Or(gs) => {
                for g in gs {
                    let mut t = todo.clone();
                    t.push(g);
                    if self.run(lits, t)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Atom(a) if !a.mentions(self.x) => {
                if self.s.eval_formula(&Formula::Atom(a), self.env)? {
                    self.run(lits, todo)
                } else {
                    Ok(false)
                }
            }
            Formula::Atom(a) if a.rel == Rel::Eq => {
                if !self.allow_pinned {
                    return Ok(false);
                }
                let mut env2 = self.env.clone();
                env2.insert(self.x.clone(), self.s.term_element(&solved(self.x, &a), self.env)?);
                let rest = Formula::And(
                    lits.iter().cloned().map(Formula::Atom).chain(todo).collect(),
                );
                self.s.eval_formula(&rest, &env2)
            }
            Formula::Atom(a) => {
                let strict = a.rel == Rel::Lt;
                lits.push(a);
                let r = if strict && self.feasible(lits)? == Feasibility::Infeasible {
                    Ok(false)
                } else {
                    self.run(lits, todo)
                };
                lits.pop();
                r
            }
            other => Err(Error::parse(1, 1, format!("unexpected subformula in oracle search: {other}"))),
        }
    }

    fn feasible(&mut self, lits: &[Atom]) -> Result<Feasibility> {
        if lits.is_empty() {
            return Ok(Feasibility::Feasible);
        }
        let involved: Vec<&Atom> = lits.iter().collect();
        let (rows, k) = components(self.x, &involved);
        let mut cons = Vec::with_capacity(involved.len());
        for (a, row) in involved.iter().zip(rows) {
            let constant = self.s.eval_term(&a.lhs.without(self.x), self.env)?;
            cons.push(LinConstraint::new(row, constant, a.rel));
        }
        let c = self.s.completion;
        Ok(numeric_feasible(k, &cons, &c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::qe::Completion;
    use rand::SeedableRng;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn sentences_match_known_truth() {
        let mut s = ModelSession::new(Completion::GermPosInf, 0);
        let env = BTreeMap::new();
        for (f, truth) in [
            ("(forall (y) (exists (x) (= (lam t x) y)))", true),
            ("(forall (x) (implies (> (lam t x) 0) (> x 0)))", false),
            ("(exists (x) (and (< x one) (> (lam t x) (lam t one))))", true),
            ("(forall (x y) (or (< x y) (< y x) (= x y)))", true),
            ("(exists (x y) (and (< x y) (< y x)))", false),
            ("(> (lam t-100 one) 0)", true),
        ] {
            assert_eq!(eval_formula(&mut s, &p(f), &env).unwrap(), truth, "{f}");
        }
    }

    #[test]
    fn open_formulas_at_points() {
        let mut s = ModelSession::new(Completion::GermPosInf, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = p("(exists (x) (and (< y x) (< x z)))");
        for _ in 0..20 {
            let y = s.sample_element(&mut rng);
            let z = s.sample_element(&mut rng);
            let env: BTreeMap<Var, ModelElement> = [(Var::new("y"), y), (Var::new("z"), z)].into_iter().collect();
            let direct = s.eval_formula(&p("(< y z)"), &env).unwrap();
            assert_eq!(eval_formula(&mut s, &f, &env).unwrap(), direct);
        }
    }

    #[test]
    fn exists_inf_drops_pinned() {
        let mut s = ModelSession::new(Completion::GermPosInf, 0);
        let env = BTreeMap::new();
        assert!(!eval_formula(&mut s, &p("(exists-inf (x) (= (lam t x) one))"), &env).unwrap());
        assert!(eval_formula(&mut s, &p("(exists-inf (x) (!= (lam t x) 0))"), &env).unwrap());
    }
}
