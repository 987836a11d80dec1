//! Canonical printer. Output re-parses to the same normalized AST; the
//! printer never rewrites the formula tree.

use std::fmt;

use num_traits::Signed;

use super::formula::{Atom, Formula, Rel};
use super::term::{LinearTerm, Var};
use crate::qfield::RationalFunction;

fn summand(x: Option<&Var>, q: &RationalFunction) -> String {
    let name = x.map_or("one", |v| v.name());
    if q.is_one() {
        name.to_string()
    } else {
        format!("(lam {q} {name})")
    }
}

fn sum(items: &[String]) -> String {
    match items {
        [] => "0".to_string(),
        [one] => one.clone(),
        _ => format!("(+ {})", items.join(" ")),
    }
}

/// Print a term as a single sum, variables sorted, constant last.
pub fn print_term(t: &LinearTerm) -> String {
    let mut items: Vec<String> = t.coeffs().iter().map(|(x, q)| summand(Some(x), q)).collect();
    if !t.constant_part().is_zero() {
        items.push(summand(None, t.constant_part()));
    }
    sum(&items)
}

/// Split `lhs` into the two sides of `L ⋈ R` with positive coefficients on
/// the left and negated negative ones on the right.
fn sides(lhs: &LinearTerm) -> (String, String) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let entries = lhs
        .coeffs()
        .iter()
        .map(|(x, q)| (Some(x), q))
        .chain(std::iter::once((None, lhs.constant_part())).filter(|(_, q)| !q.is_zero()));
    for (x, q) in entries {
        if q.leading_ratio().is_positive() {
            pos.push(summand(x, q));
        } else {
            neg.push(summand(x, &q.neg()));
        }
    }
    (sum(&pos), sum(&neg))
}

pub fn print_atom(a: &Atom) -> String {
    let (l, r) = sides(&a.lhs);
    let op = match a.rel {
        Rel::Eq => "=",
        Rel::Lt => "<",
        Rel::Ne => "!=",
    };
    format!("({op} {l} {r})")
}

fn var_list(vs: &[Var]) -> String {
    let names: Vec<&str> = vs.iter().map(Var::name).collect();
    format!("({})", names.join(" "))
}

pub fn print_canonical(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(a) => out.push_str(&print_atom(a)),
        Formula::Not(g) => {
            out.push_str("(not ");
            write_formula(g, out);
            out.push(')');
        }
        Formula::And(gs) | Formula::Or(gs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in gs {
                out.push(' ');
                write_formula(g, out);
            }
            out.push(')');
        }
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let kw = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            out.push_str(&format!("({kw} {} ", var_list(vs)));
            write_formula(g, out);
            out.push(')');
        }
        Formula::ExistsInf(x, g) => {
            out.push_str(&format!("(exists-inf ({x}) "));
            write_formula(g, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_canonical(self))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_atom(self))
    }
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Debug for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse::{parse_formula, parse_term};

    #[test]
    fn printer_examples() {
        let s = LinearTerm::scaled_var(RationalFunction::t(), "x").add(&LinearTerm::var("y"));
        assert_eq!(print_atom(&Atom::lt(s)), "(< (+ (lam t x) y) 0)");
        assert_eq!(print_atom(&Atom::eq(LinearTerm::zero())), "(= 0 0)");
        let f = Formula::not(Formula::not(Formula::True));
        assert_eq!(print_canonical(&f), "(not (not true))");
    }

    #[test]
    fn negative_parts_move_right() {
        let f = parse_formula("(< (lam 1/t y) z)").unwrap();
        assert_eq!(print_canonical(&f), "(< (lam 1/t y) z)");
        let f = parse_formula("(> (lam (- t 100) one) (const 0))").unwrap();
        assert_eq!(print_canonical(&f), "(< 0 (lam -100+t one))");
        assert_eq!(parse_formula(&print_canonical(&f)).unwrap(), f);
    }

    #[test]
    fn term_round_trip() {
        let t = parse_term("(+ (lam (1-t)/(1+t^2) x) (neg y) (const 3/4))").unwrap();
        assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
    }
}
