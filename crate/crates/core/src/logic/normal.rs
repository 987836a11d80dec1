//! Negation and disjunctive normal forms, atom normalization, simplification.

use num_traits::Signed;

use super::formula::{Atom, Formula, Rel};
use super::term::LinearTerm;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Nnf,
    Dnf,
}

/// Scale an atom to its normal representative.
///
/// `=` and `!=` are divided by the leading coefficient (first variable, else
/// the constant). `<` only admits positive rational scaling, since `λ_q` is
/// not monotone, so it is divided by the absolute leading ratio.
pub fn normalize_atom(a: &Atom) -> Atom {
    let lead = match a.lhs.coeffs().values().next() {
        Some(q) => q.clone(),
        None => a.lhs.constant_part().clone(),
    };
    if lead.is_zero() || lead.is_one() {
        return a.clone();
    }
    let lhs = match a.rel {
        Rel::Eq | Rel::Ne => a.lhs.scale(&lead.inv().expect("nonzero")),
        Rel::Lt => {
            let r = lead.leading_ratio().abs();
            a.lhs.scale_q(&r.recip())
        }
    };
    Atom::new(lhs, a.rel)
}

/// Truth value of a variable-free atom when it does not depend on the
/// completion: `λ_c(1) = 0` iff `c = 0`, and `λ_c(1) < 0` for rational `c`.
pub fn ground_truth(a: &Atom) -> Option<bool> {
    if !a.lhs.is_ground() {
        return None;
    }
    let c = a.lhs.constant_part();
    match a.rel {
        Rel::Eq => Some(c.is_zero()),
        Rel::Ne => Some(!c.is_zero()),
        Rel::Lt => c.as_rational().map(|r| r.is_negative()),
    }
}

fn atom_formula(a: Atom) -> Formula {
    let a = normalize_atom(&a);
    match ground_truth(&a) {
        Some(true) => Formula::True,
        Some(false) => Formula::False,
        None => Formula::Atom(a),
    }
}

/// Literals of `¬(lhs ⋈ 0)`.
fn negate_atom(a: &Atom) -> Formula {
    match a.rel {
        Rel::Eq => Atom::ne(a.lhs.clone()).into(),
        Rel::Ne => Atom::eq(a.lhs.clone()).into(),
        Rel::Lt => Formula::Or(vec![Atom::lt(a.lhs.neg()).into(), Atom::eq(a.lhs.clone()).into()]),
    }
}

/// Negation normal form with normalized atoms. `¬∃^∞` has no dual and is
/// kept as a negated subformula.
pub fn nnf(f: &Formula) -> Formula {
    nnf_rec(f, false)
}

fn nnf_rec(f: &Formula, neg: bool) -> Formula {
    match (f, neg) {
        (Formula::True, false) | (Formula::False, true) => Formula::True,
        (Formula::True, true) | (Formula::False, false) => Formula::False,
        (Formula::Atom(a), false) => atom_formula(a.clone()),
        (Formula::Atom(a), true) => nnf_rec(&negate_atom(a), false),
        (Formula::Not(g), _) => nnf_rec(g, !neg),
        (Formula::And(gs), false) | (Formula::Or(gs), true) => {
            Formula::And(gs.iter().map(|g| nnf_rec(g, neg)).collect())
        }
        (Formula::Or(gs), false) | (Formula::And(gs), true) => {
            Formula::Or(gs.iter().map(|g| nnf_rec(g, neg)).collect())
        }
        (Formula::Exists(vs, g), false) | (Formula::Forall(vs, g), true) => {
            Formula::exists(vs.clone(), nnf_rec(g, neg))
        }
        (Formula::Forall(vs, g), false) | (Formula::Exists(vs, g), true) => {
            Formula::forall(vs.clone(), nnf_rec(g, neg))
        }
        (Formula::ExistsInf(x, g), false) => Formula::exists_inf(x.clone(), nnf_rec(g, false)),
        (Formula::ExistsInf(x, g), true) => Formula::not(Formula::exists_inf(x.clone(), nnf_rec(g, false))),
    }
}

/// DNF of a quantifier-free formula as a list of literal conjunctions.
/// Trivially false clauses are dropped; an empty list means `false`.
pub fn dnf_clauses(f: &Formula) -> Result<Vec<Vec<Atom>>> {
    if !f.is_quantifier_free() {
        return Err(Error::QuantifierInDnfInput);
    }
    Ok(clauses(&nnf(f)))
}

fn clauses(f: &Formula) -> Vec<Vec<Atom>> {
    match f {
        Formula::True => vec![Vec::new()],
        Formula::False => Vec::new(),
        Formula::Atom(a) => vec![vec![a.clone()]],
        Formula::Or(gs) => {
            let mut out: Vec<Vec<Atom>> = gs.iter().flat_map(clauses).collect();
            out.sort();
            out.dedup();
            out
        }
        Formula::And(gs) => {
            let mut acc: Vec<Vec<Atom>> = vec![Vec::new()];
            for g in gs {
                let cs = clauses(g);
                let mut next = Vec::with_capacity(acc.len() * cs.len());
                for a in &acc {
                    for c in &cs {
                        let mut merged = a.clone();
                        merged.extend(c.iter().cloned());
                        merged.sort();
                        merged.dedup();
                        if !contradictory(&merged) {
                            next.push(merged);
                        }
                    }
                }
                next.sort();
                next.dedup();
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        // Unreachable for quantifier-free NNF input.
        Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) | Formula::ExistsInf(..) => {
            unreachable!("clauses on non-NNF input")
        }
    }
}

/// Pairwise-inconsistent literals: `s = 0` with `s ≠ 0` or `s < 0`, and
/// `s < 0` with `-s < 0`.
fn contradictory(lits: &[Atom]) -> bool {
    for (i, a) in lits.iter().enumerate() {
        for b in &lits[i + 1..] {
            if complementary_in_and(a, b) {
                return true;
            }
        }
    }
    false
}

fn complementary_in_and(a: &Atom, b: &Atom) -> bool {
    let same = |x: &Atom, y: &Atom| normalize_atom(&Atom::eq(x.lhs.clone())).lhs == normalize_atom(&Atom::eq(y.lhs.clone())).lhs;
    match (a.rel, b.rel) {
        (Rel::Eq, Rel::Ne) | (Rel::Ne, Rel::Eq) => a.lhs == b.lhs,
        (Rel::Eq, Rel::Lt) | (Rel::Lt, Rel::Eq) => same(a, b),
        (Rel::Lt, Rel::Lt) => normalize_atom(&Atom::lt(a.lhs.neg())).lhs == b.lhs,
        _ => false,
    }
}

pub fn to_nnf_dnf(f: &Formula, mode: Mode) -> Result<Formula> {
    match mode {
        Mode::Nnf => Ok(nnf(f)),
        Mode::Dnf => {
            let cs = dnf_clauses(f)?;
            Ok(Formula::Or(
                cs.into_iter()
                    .map(|c| Formula::And(c.into_iter().map(Formula::Atom).collect()))
                    .collect(),
            ))
        }
    }
}

/// Evaluate a quantifier-free formula given the truth of each atom.
pub fn eval_qf(f: &Formula, atom: &mut impl FnMut(&Atom) -> bool) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => atom(a),
        Formula::Not(g) => !eval_qf(g, atom)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_qf(g, atom)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_qf(g, atom)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists(..) | Formula::Forall(..) | Formula::ExistsInf(..) => return Err(Error::NotQuantifierFree),
    })
}

/// Bottom-up cleanup: normalized atoms, flattened and sorted connectives,
/// constant folding, complementary pairs, and vacuous binders removed.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => atom_formula(a.clone()),
        Formula::Not(g) => match simplify(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(h) => *h,
            Formula::Atom(a) if a.rel != Rel::Lt => nnf_rec(&Formula::Atom(a), true),
            h => Formula::not(h),
        },
        Formula::And(gs) => junction(gs, true),
        Formula::Or(gs) => junction(gs, false),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let body = simplify(g);
            let free = body.free_vars();
            let kept: Vec<_> = vs.iter().filter(|v| free.contains(v)).cloned().collect();
            if kept.is_empty() {
                return body;
            }
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(kept, body)
            } else {
                Formula::forall(kept, body)
            }
        }
        Formula::ExistsInf(x, g) => {
            let body = simplify(g);
            // The models are infinite, so a body not mentioning x is either
            // satisfied by every element or by none.
            if !body.mentions(x) {
                body
            } else {
                Formula::exists_inf(x.clone(), body)
            }
        }
    }
}

fn junction(gs: &[Formula], is_and: bool) -> Formula {
    let (unit, absorbing) = if is_and {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut items = Vec::new();
    for g in gs {
        let s = simplify(g);
        match s {
            Formula::And(hs) if is_and => items.extend(hs),
            Formula::Or(hs) if !is_and => items.extend(hs),
            s if s == unit => {}
            s if s == absorbing => return absorbing,
            s => items.push(s),
        }
    }
    items.sort();
    items.dedup();
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            if complementary(a, b, is_and) {
                return absorbing;
            }
        }
    }
    absorb(&mut items, is_and);
    match items.len() {
        0 => unit,
        1 => items.pop().unwrap(),
        _ if is_and => Formula::And(items),
        _ => Formula::Or(items),
    }
}

/// Children of the dual junction, or the formula itself.
fn dual_parts(f: &Formula, is_and: bool) -> &[Formula] {
    match f {
        Formula::Or(hs) if is_and => hs,
        Formula::And(hs) if !is_and => hs,
        _ => std::slice::from_ref(f),
    }
}

/// `a ∨ (a ∧ b) = a` and `a ∧ (a ∨ b) = a`.
fn absorb(items: &mut Vec<Formula>, is_and: bool) {
    let mut drop = vec![false; items.len()];
    for (j, b) in items.iter().enumerate() {
        let bp = dual_parts(b, is_and);
        drop[j] = items.iter().enumerate().any(|(i, a)| {
            i != j && !drop[i] && {
                let ap = dual_parts(a, is_and);
                ap.len() < bp.len() && ap.iter().all(|x| bp.contains(x))
            }
        });
    }
    let mut k = 0;
    items.retain(|_| {
        k += 1;
        !drop[k - 1]
    });
}

fn complementary(a: &Formula, b: &Formula, is_and: bool) -> bool {
    match (a, b) {
        (Formula::Not(x), y) | (y, Formula::Not(x)) if x.as_ref() == y => true,
        (Formula::Atom(x), Formula::Atom(y)) => {
            if is_and {
                complementary_in_and(x, y)
            } else {
                matches!((x.rel, y.rel), (Rel::Eq, Rel::Ne) | (Rel::Ne, Rel::Eq)) && x.lhs == y.lhs
            }
        }
        _ => false,
    }
}

/// `simplify ∘ nnf`; idempotent.
pub fn canonical(f: &Formula) -> Formula {
    simplify(&nnf(f))
}

/// `a < b` as a normalized atom formula.
pub fn less(a: &LinearTerm, b: &LinearTerm) -> Formula {
    atom_formula(Atom::less(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn trichotomy_under_negation() {
        let f = nnf(&p("(not (< x y))"));
        assert_eq!(f, canonical(&p("(or (< y x) (= x y))")));
        assert_eq!(f.to_string(), "(or (< y x) (= x y))");
    }

    #[test]
    fn double_negation_and_distribution() {
        assert_eq!(nnf(&p("(not (not (< x 0)))")), p("(< x 0)"));
        let f = to_nnf_dnf(&p("(and (or (< x 0) (< y 0)) (< z 0))"), Mode::Dnf).unwrap();
        assert_eq!(f, p("(or (and (< x 0) (< z 0)) (and (< y 0) (< z 0)))"));
    }

    #[test]
    fn dnf_rejects_quantifiers() {
        assert_eq!(dnf_clauses(&p("(exists (x) (< x 0))")), Err(Error::QuantifierInDnfInput));
    }

    #[test]
    fn atoms_normalize() {
        let a = normalize_atom(&Atom::eq(crate::logic::parse_term("(+ (lam 2*t x) (lam t one))").unwrap()));
        assert_eq!(a.to_string(), "(= (+ x (lam 1/2 one)) 0)");
        let a = normalize_atom(&Atom::lt(crate::logic::parse_term("(lam -2*t x)").unwrap()));
        assert_eq!(a.to_string(), "(< 0 (lam t x))");
        assert_eq!(ground_truth(&Atom::lt(LinearTerm::constant(crate::qfield::RationalFunction::t()))), None);
    }

    #[test]
    fn simplify_folds() {
        assert_eq!(simplify(&p("(and (< x 0) (not (< x 0)))")), Formula::False);
        assert_eq!(simplify(&p("(or (= x 0) (!= x 0))")), Formula::True);
        assert_eq!(simplify(&p("(exists (y) (< x 0))")), p("(< x 0)"));
        assert_eq!(simplify(&p("(< one 0)")), Formula::False);
        let f = p("(forall (x) (or (< x y) (not (exists (z) (and (< z x) (= z one))))))");
        assert_eq!(canonical(&canonical(&f)), canonical(&f));
    }
}
