//! Quantifier elimination: equality substitution, component variables and
//! Fourier–Motzkin over the dense order.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::completion::Completion;
use super::decide::resolve_ground;
use crate::error::{Error, Result};
use crate::logic::{canonical, dnf_clauses, simplify, Atom, Formula, LinearTerm, Rel, Var};
use crate::qfield::{q_basis, Rational, RationalFunction};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QeStats {
    pub dnf_branches: usize,
    pub fm_steps: usize,
}

impl QeStats {
    pub fn absorb(&mut self, other: QeStats) {
        self.dnf_branches += other.dnf_branches;
        self.fm_steps += other.fm_steps;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QeResult {
    pub formula: Formula,
    pub stats: QeStats,
}

/// `Σ z[l]·z_l + rest < 0`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    z: Vec<Rational>,
    rest: LinearTerm,
}

impl Row {
    fn normalized(mut self) -> Row {
        if let Some(lead) = self.z.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            let inv = lead.recip();
            for c in &mut self.z {
                *c *= &inv;
            }
            self.rest = self.rest.scale_q(&inv);
        }
        self
    }

    fn is_x_free(&self) -> bool {
        self.z.iter().all(Zero::is_zero)
    }
}

/// Drop rows implied by a row with the same direction whose constant is
/// larger by a positive rational.
fn prune(rows: Vec<Row>) -> Vec<Row> {
    let mut groups: BTreeMap<(Vec<Rational>, LinearTerm), Vec<RationalFunction>> = BTreeMap::new();
    for r in rows {
        let key = (r.z, LinearTerm::from_parts(r.rest.coeffs().clone(), RationalFunction::zero()));
        groups.entry(key).or_default().push(r.rest.constant_part().clone());
    }
    let mut out = Vec::new();
    for ((z, body), mut cs) in groups {
        cs.sort();
        cs.dedup();
        let keep: Vec<RationalFunction> = cs
            .iter()
            .enumerate()
            .filter(|(j, cj)| {
                !cs.iter().enumerate().any(|(i, ci)| {
                    i != *j && ci.sub(cj).as_rational().is_some_and(|d| d.is_positive())
                })
            })
            .map(|(_, c)| c.clone())
            .collect();
        for c in keep {
            out.push(Row {
                z: z.clone(),
                rest: body.add(&LinearTerm::constant(c)),
            });
        }
    }
    out
}

/// Fourier–Motzkin on strict rows; returns the `z`-free remainder.
fn fourier_motzkin(mut rows: Vec<Row>, k: usize, stats: &mut QeStats) -> Vec<LinearTerm> {
    let mut done: Vec<LinearTerm> = Vec::new();
    let mut remaining: Vec<usize> = (0..k).collect();
    loop {
        let (free, bound): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(Row::is_x_free);
        done.extend(free.into_iter().map(|r| r.rest));
        rows = prune(bound);
        if rows.is_empty() || remaining.is_empty() {
            return done;
        }
        // cheapest variable first
        let (pos, &l) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &l)| {
                let lo = rows.iter().filter(|r| r.z[l].is_negative()).count();
                let up = rows.iter().filter(|r| r.z[l].is_positive()).count();
                (lo * up) as i64 - (lo + up) as i64
            })
            .unwrap();
        remaining.remove(pos);
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.z[l].is_negative() {
                lower.push(r);
            } else if r.z[l].is_positive() {
                upper.push(r);
            } else {
                rest.push(r);
            }
        }
        // lower: a·z + s < 0 with a < 0; upper: b·z + r < 0 with b > 0.
        // b·(lower) + (−a)·(upper) cancels z.
        for lo in &lower {
            for up in &upper {
                stats.fm_steps += 1;
                let a = &lo.z[l];
                let b = &up.z[l];
                let na = -a;
                let z: Vec<Rational> = lo.z.iter().zip(&up.z).map(|(p, q)| b * p + &na * q).collect();
                let rest_term = lo.rest.scale_q(b).add(&up.rest.scale_q(&na));
                rest.push(Row { z, rest: rest_term }.normalized());
            }
        }
        rows = rest;
    }
}

/// `∃x` over a conjunction of literals.
pub fn elim_exists_conjunct(x: &Var, literals: &[Atom]) -> Formula {
    elim_conjunct_with_stats(x, literals, &mut QeStats::default())
}

/// As [`elim_exists_conjunct`], for a formula that must be a conjunction of
/// literals.
pub fn elim_exists_conjunct_formula(x: &Var, f: &Formula) -> Result<Formula> {
    let lits: Vec<Atom> = match f {
        Formula::Atom(a) => vec![a.clone()],
        Formula::True => Vec::new(),
        Formula::And(gs) => gs
            .iter()
            .map(|g| match g {
                Formula::Atom(a) => Ok(a.clone()),
                _ => Err(Error::NotLinearized),
            })
            .collect::<Result<_>>()?,
        _ => return Err(Error::NotLinearized),
    };
    Ok(elim_exists_conjunct(x, &lits))
}

fn conj(atoms: impl IntoIterator<Item = Atom>) -> Formula {
    simplify(&Formula::And(atoms.into_iter().map(Formula::Atom).collect()))
}

fn elim_conjunct_with_stats(x: &Var, literals: &[Atom], stats: &mut QeStats) -> Formula {
    // equality phase
    if let Some(eq) = literals.iter().find(|a| a.rel == Rel::Eq && a.mentions(x)) {
        let q = eq.lhs.coeff(x);
        let repl = eq.lhs.without(x).scale(&q.inv().expect("nonzero").neg());
        return conj(literals.iter().map(|a| Atom::new(a.lhs.substitute(x, &repl), a.rel)));
    }
    inequality_phase(x, literals, stats)
}

fn inequality_phase(x: &Var, literals: &[Atom], stats: &mut QeStats) -> Formula {
    let mut out: Vec<Atom> = Vec::new();
    let mut involved: Vec<&Atom> = Vec::new();
    for a in literals {
        if !a.mentions(x) {
            out.push(a.clone());
        } else if a.rel == Rel::Lt {
            involved.push(a);
        }
        // `≠` literals mentioning x only remove a hyperplane from an open set
    }
    if !involved.is_empty() {
        let qs: Vec<RationalFunction> = involved.iter().map(|a| a.lhs.coeff(x)).collect();
        let dec = q_basis(&qs);
        let rows: Vec<Row> = involved
            .iter()
            .zip(&dec.matrix)
            .map(|(a, z)| Row { z: z.clone(), rest: a.lhs.without(x) }.normalized())
            .collect();
        out.extend(fourier_motzkin(rows, dec.rank(), stats).into_iter().map(Atom::lt));
    }
    conj(out)
}

/// Eliminate `∃x` from a quantifier-free formula.
fn elim_exists_qf(x: &Var, body: &Formula, stats: &mut QeStats, c: Option<&Completion>) -> Result<Formula> {
    let body = settle(body, c);
    if !body.mentions(x) {
        return Ok(body);
    }
    match &body {
        Formula::Or(gs) => {
            let parts = gs.iter().map(|g| elim_exists_qf(x, g, stats, c)).collect::<Result<Vec<_>>>()?;
            Ok(simplify(&Formula::Or(parts)))
        }
        Formula::And(gs) => {
            let (with_x, without): (Vec<Formula>, Vec<Formula>) = gs.iter().cloned().partition(|g| g.mentions(x));
            let clauses = dnf_clauses(&Formula::And(with_x))?;
            stats.dnf_branches += clauses.len();
            let mut parts = Vec::with_capacity(clauses.len());
            for cl in &clauses {
                let e = settle(&elim_conjunct_with_stats(x, cl, stats), c);
                if e == Formula::True {
                    parts = vec![Formula::True];
                    break;
                }
                parts.push(e);
            }
            let mut conj = without;
            conj.push(Formula::Or(parts));
            Ok(simplify(&Formula::And(conj)))
        }
        _ => {
            let clauses = dnf_clauses(&body)?;
            stats.dnf_branches += clauses.len();
            let parts: Vec<Formula> = clauses.iter().map(|cl| settle(&elim_conjunct_with_stats(x, cl, stats), c)).collect();
            Ok(simplify(&Formula::Or(parts)))
        }
    }
}

/// `∃^∞x` over a quantifier-free formula: disjuncts whose equalities pin
/// `x` have finitely many witnesses and are dropped.
pub fn elim_exists_inf(x: &Var, f: &Formula) -> Result<Formula> {
    elim_exists_inf_with_stats(x, f, &mut QeStats::default())
}

fn elim_exists_inf_with_stats(x: &Var, f: &Formula, stats: &mut QeStats) -> Result<Formula> {
    if !f.is_quantifier_free() {
        return Err(Error::NotQuantifierFree);
    }
    let clauses = dnf_clauses(f)?;
    stats.dnf_branches += clauses.len();
    let mut parts = Vec::new();
    for c in &clauses {
        if c.iter().any(|a| a.rel == Rel::Eq && a.mentions(x)) {
            continue;
        }
        parts.push(inequality_phase(x, c, stats));
    }
    Ok(simplify(&Formula::Or(parts)))
}

/// Canonical form, with ground atoms decided when a completion is given.
fn settle(f: &Formula, c: Option<&Completion>) -> Formula {
    match c {
        Some(c) => canonical(&resolve_ground(f, c)),
        None => canonical(f),
    }
}

fn qe_rec(f: &Formula, stats: &mut QeStats, c: Option<&Completion>) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(qe_rec(g, stats, c)?),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| qe_rec(g, stats, c)).collect::<Result<_>>()?),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| qe_rec(g, stats, c)).collect::<Result<_>>()?),
        Formula::Exists(vs, g) => {
            let mut body = qe_rec(g, stats, c)?;
            for x in vs.iter().rev() {
                body = elim_exists_qf(x, &body, stats, c)?;
            }
            body
        }
        Formula::Forall(vs, g) => {
            let mut body = settle(&Formula::not(qe_rec(g, stats, c)?), c);
            for x in vs.iter().rev() {
                body = elim_exists_qf(x, &body, stats, c)?;
            }
            canonical(&Formula::not(body))
        }
        Formula::ExistsInf(x, g) => {
            let body = qe_rec(g, stats, c)?;
            elim_exists_inf_with_stats(x, &settle(&body, c), stats)?
        }
    })
}

/// Innermost-first elimination of every quantifier.
pub fn elim_quantifiers(f: &Formula) -> Result<QeResult> {
    let mut stats = QeStats::default();
    let formula = canonical(&qe_rec(f, &mut stats, None)?);
    Ok(QeResult { formula, stats })
}

/// [`elim_quantifiers`] with ground atoms decided by `c` as they appear.
/// The result is equivalent to the plain one in every model whose type of
/// `1` is `c`.
pub fn elim_quantifiers_in(f: &Formula, c: &Completion) -> Result<QeResult> {
    let mut stats = QeStats::default();
    let formula = settle(&qe_rec(f, &mut stats, Some(c))?, Some(c));
    Ok(QeResult { formula, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn qe(s: &str) -> Formula {
        elim_quantifiers(&p(s)).unwrap().formula
    }

    #[test]
    fn conjunct_examples() {
        let x = Var::new("x");
        let f = p("(and (= (lam t x) y) (< x z))");
        let out = elim_exists_conjunct_formula(&x, &f).unwrap();
        assert_eq!(out, canonical(&p("(< (lam 1/t y) z)")));

        let f = p("(and (< (lam t x) y) (> (lam 2*t x) (lam 2 y)))");
        assert_eq!(elim_exists_conjunct_formula(&x, &f).unwrap(), Formula::False);

        let f = p("(and (< x y) (> (lam t x) (lam t y)))");
        assert_eq!(elim_exists_conjunct_formula(&x, &f).unwrap(), Formula::True);

        assert_eq!(elim_exists_conjunct_formula(&x, &p("(or (< x 0) (< y 0))")), Err(Error::NotLinearized));
    }

    #[test]
    fn quantifier_examples() {
        assert_eq!(qe("(forall (y) (exists (x) (= (lam t x) y)))"), Formula::True);
        assert_eq!(qe("(forall (x) (implies (> (lam t x) 0) (> x 0)))"), Formula::False);
        assert_eq!(qe("(exists (x) (!= x y))"), Formula::True);
    }

    #[test]
    fn exists_inf_examples() {
        let x = Var::new("x");
        assert_eq!(elim_exists_inf(&x, &p("(= (lam t x) y)")).unwrap(), Formula::False);
        assert_eq!(elim_exists_inf(&x, &p("(and (< y x) (< x z))")).unwrap(), canonical(&p("(< y z)")));
        assert_eq!(elim_exists_inf(&x, &p("(!= (lam t x) 0)")).unwrap(), Formula::True);
        assert_eq!(elim_exists_inf(&x, &p("(exists (y) (< x y))")), Err(Error::NotQuantifierFree));
    }

    #[test]
    fn output_is_quantifier_free_and_idempotent() {
        let f = p("(exists (x) (and (< y x) (< x (lam t y)) (!= x z)))");
        let r = elim_quantifiers(&f).unwrap();
        assert!(r.formula.is_quantifier_free());
        assert!(r.formula.free_vars().is_subset(&f.free_vars()));
        assert_eq!(elim_quantifiers(&r.formula).unwrap().formula, r.formula);
        assert!(r.stats.dnf_branches >= 1);
    }
}
