use std::collections::{BTreeMap, BTreeSet};

use super::formula::{fresh_var, Atom, Formula};
use super::sexp::{read_one, Sexp};
use super::term::{normalize_to_linear, LinearTerm, RawTerm, Var};
use crate::error::{Error, Result};
use crate::qfield::RationalFunction;

/// Result of [`parse`]: the text was either a formula or a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Formula(Formula),
    Term(LinearTerm),
}

const FORMULA_HEADS: &[&str] = &[
    "=", "<", "<=", ">", ">=", "!=", "and", "or", "not", "implies", "iff", "exists", "forall", "exists-inf",
];

/// Parse either a formula or a term, deciding by the outermost form.
pub fn parse(text: &str) -> Result<Parsed> {
    let e = read_one(text)?;
    let is_formula = match &e {
        Sexp::Atom { text, .. } => text == "true" || text == "false",
        Sexp::List { .. } => e.head().is_some_and(|h| FORMULA_HEADS.contains(&h)),
    };
    if is_formula {
        Ok(Parsed::Formula(alpha_rename(&formula_from_sexp(&e)?)))
    } else {
        Ok(Parsed::Term(normalize_to_linear(&raw_term_from_sexp(&e)?)))
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let e = read_one(text)?;
    Ok(alpha_rename(&formula_from_sexp(&e)?))
}

/// Parse a closed formula; free variables are rejected.
pub fn parse_sentence(text: &str) -> Result<Formula> {
    let f = parse_formula(text)?;
    if let Some(x) = f.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(x.name().to_string()));
    }
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<LinearTerm> {
    term_from_sexp(&read_one(text)?)
}

pub fn term_from_sexp(e: &Sexp) -> Result<LinearTerm> {
    Ok(normalize_to_linear(&raw_term_from_sexp(e)?))
}

pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn looks_numeric(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_digit() || c == '(' => true,
        Some('-') | Some('+') => cs.next().is_some_and(|c| c.is_ascii_digit() || c == '(' || c == 't'),
        _ => false,
    }
}

pub fn variable_from_sexp(e: &Sexp) -> Result<Var> {
    match e.as_atom() {
        Some(s) if is_identifier(s) && s != "one" && s != "true" && s != "false" => Ok(Var::new(s)),
        Some(s) => Err(e.error(format!("`{s}` is not a valid variable name"))),
        None => Err(e.error("expected a variable")),
    }
}

fn args<'a>(e: &'a Sexp, n: usize, what: &str) -> Result<&'a [Sexp]> {
    let items = e.as_list().unwrap_or(&[]);
    if items.len() != n + 1 {
        return Err(e.error(format!("`{what}` expects {n} argument(s), got {}", items.len().saturating_sub(1))));
    }
    Ok(&items[1..])
}

pub fn raw_term_from_sexp(e: &Sexp) -> Result<RawTerm> {
    match e {
        Sexp::Atom { text, .. } => {
            if text == "one" {
                Ok(RawTerm::One)
            } else if looks_numeric(text) {
                Ok(RawTerm::Const(rf_from_sexp(e)?))
            } else {
                Ok(RawTerm::Var(variable_from_sexp(e)?))
            }
        }
        Sexp::List { items, .. } => {
            let head = e.head().ok_or_else(|| e.error("expected a term"))?;
            let rest = &items[1..];
            match head {
                "+" => Ok(RawTerm::Add(rest.iter().map(raw_term_from_sexp).collect::<Result<_>>()?)),
                "neg" => {
                    let a = args(e, 1, "neg")?;
                    Ok(RawTerm::Neg(Box::new(raw_term_from_sexp(&a[0])?)))
                }
                "-" => match rest.len() {
                    0 => Err(e.error("`-` needs at least one argument")),
                    1 => Ok(RawTerm::Neg(Box::new(raw_term_from_sexp(&rest[0])?))),
                    _ => {
                        let mut acc = raw_term_from_sexp(&rest[0])?;
                        for r in &rest[1..] {
                            acc = RawTerm::Sub(Box::new(acc), Box::new(raw_term_from_sexp(r)?));
                        }
                        Ok(acc)
                    }
                },
                "lam" => {
                    let a = args(e, 2, "lam")?;
                    Ok(RawTerm::Lam(rf_from_sexp(&a[0])?, Box::new(raw_term_from_sexp(&a[1])?)))
                }
                "const" => {
                    let a = args(e, 1, "const")?;
                    Ok(RawTerm::Const(rf_from_sexp(&a[0])?))
                }
                other => Err(e.error(format!("unknown term constructor `{other}`"))),
            }
        }
    }
}

/// A rational-function literal: an infix atom or a prefix `(op …)` form.
pub fn rf_from_sexp(e: &Sexp) -> Result<RationalFunction> {
    match e {
        Sexp::Atom { text, line, column } => RationalFunction::parse(text).map_err(|err| match err {
            Error::Parse { column: c, message, .. } => Error::parse(*line, column + c - 1, message),
            other => other,
        }),
        Sexp::List { items, .. } => {
            if items.len() == 1 {
                return rf_from_sexp(&items[0]);
            }
            let head = e.head().ok_or_else(|| e.error("expected a rational-function literal"))?;
            let vals = || items[1..].iter().map(rf_from_sexp).collect::<Result<Vec<_>>>();
            match head {
                "+" => Ok(vals()?.iter().fold(RationalFunction::zero(), |a, b| a.add(b))),
                "*" => Ok(vals()?.iter().fold(RationalFunction::one(), |a, b| a.mul(b))),
                "neg" => {
                    let a = args(e, 1, "neg")?;
                    Ok(rf_from_sexp(&a[0])?.neg())
                }
                "-" => {
                    let v = vals()?;
                    match v.split_first() {
                        None => Err(e.error("`-` needs at least one argument")),
                        Some((a, [])) => Ok(a.neg()),
                        Some((a, rest)) => Ok(rest.iter().fold(a.clone(), |acc, b| acc.sub(b))),
                    }
                }
                "/" => {
                    let v = vals()?;
                    match v.split_first() {
                        Some((a, [])) => a.inv(),
                        Some((a, rest)) => rest.iter().try_fold(a.clone(), |acc, b| acc.div(b)),
                        None => Err(e.error("`/` needs at least one argument")),
                    }
                }
                "^" => {
                    let a = args(e, 2, "^")?;
                    let base = rf_from_sexp(&a[0])?;
                    let exp: u32 = a[1]
                        .as_atom()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| a[1].error("expected a nonnegative integer exponent"))?;
                    Ok(base.pow(exp))
                }
                other => Err(e.error(format!("unknown operator `{other}` in rational-function literal"))),
            }
        }
    }
}

fn binder_vars(e: &Sexp) -> Result<Vec<Var>> {
    let items = e.as_list().ok_or_else(|| e.error("expected a parenthesized variable list"))?;
    let vars: Vec<Var> = items.iter().map(variable_from_sexp).collect::<Result<_>>()?;
    let distinct: BTreeSet<&Var> = vars.iter().collect();
    if distinct.len() != vars.len() {
        return Err(e.error("repeated variable in binder"));
    }
    Ok(vars)
}

/// Convert a formula without alpha-renaming.
pub fn formula_from_sexp(e: &Sexp) -> Result<Formula> {
    match e {
        Sexp::Atom { text, .. } => match text.as_str() {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            _ => Err(e.error(format!("expected a formula, found `{text}`"))),
        },
        Sexp::List { items, .. } => {
            let head = e.head().ok_or_else(|| e.error("expected a formula"))?;
            let rest = &items[1..];
            let binary_terms = |what: &str| -> Result<(LinearTerm, LinearTerm)> {
                let a = args(e, 2, what)?;
                Ok((term_from_sexp(&a[0])?, term_from_sexp(&a[1])?))
            };
            match head {
                "=" => {
                    let (a, b) = binary_terms("=")?;
                    Ok(Atom::eq(a.sub(&b)).into())
                }
                "!=" => {
                    let (a, b) = binary_terms("!=")?;
                    Ok(Atom::ne(a.sub(&b)).into())
                }
                "<" => {
                    let (a, b) = binary_terms("<")?;
                    Ok(Atom::lt(a.sub(&b)).into())
                }
                ">" => {
                    let (a, b) = binary_terms(">")?;
                    Ok(Atom::lt(b.sub(&a)).into())
                }
                "<=" => {
                    let (a, b) = binary_terms("<=")?;
                    let d = a.sub(&b);
                    Ok(Formula::Or(vec![Atom::lt(d.clone()).into(), Atom::eq(d).into()]))
                }
                ">=" => {
                    let (a, b) = binary_terms(">=")?;
                    Ok(Formula::Or(vec![Atom::lt(b.sub(&a)).into(), Atom::eq(a.sub(&b)).into()]))
                }
                "and" => Ok(Formula::And(rest.iter().map(formula_from_sexp).collect::<Result<_>>()?)),
                "or" => Ok(Formula::Or(rest.iter().map(formula_from_sexp).collect::<Result<_>>()?)),
                "not" => {
                    let a = args(e, 1, "not")?;
                    Ok(Formula::not(formula_from_sexp(&a[0])?))
                }
                "implies" => {
                    let a = args(e, 2, "implies")?;
                    Ok(Formula::implies(formula_from_sexp(&a[0])?, formula_from_sexp(&a[1])?))
                }
                "iff" => {
                    let a = args(e, 2, "iff")?;
                    Ok(Formula::iff(formula_from_sexp(&a[0])?, formula_from_sexp(&a[1])?))
                }
                "exists" | "forall" => {
                    let a = args(e, 2, head)?;
                    let vars = binder_vars(&a[0])?;
                    let body = formula_from_sexp(&a[1])?;
                    Ok(if head == "exists" {
                        Formula::exists(vars, body)
                    } else {
                        Formula::forall(vars, body)
                    })
                }
                "exists-inf" => {
                    let a = args(e, 2, head)?;
                    let mut vars = binder_vars(&a[0])?;
                    if vars.len() != 1 {
                        return Err(a[0].error("`exists-inf` binds exactly one variable"));
                    }
                    Ok(Formula::exists_inf(vars.pop().unwrap(), formula_from_sexp(&a[1])?))
                }
                other => Err(e.error(format!("unknown formula constructor `{other}`"))),
            }
        }
    }
}

/// Rename binders that clash with a free variable or an enclosing binder.
pub fn alpha_rename(f: &Formula) -> Formula {
    let free = f.free_vars();
    let mut used = f.all_vars();
    rename_rec(f, &free, &mut Vec::new(), &mut used, &BTreeMap::new())
}

fn rename_rec(
    f: &Formula,
    free: &BTreeSet<Var>,
    enclosing: &mut Vec<Var>,
    used: &mut BTreeSet<Var>,
    map: &BTreeMap<Var, Var>,
) -> Formula {
    let bind = |vars: &[Var], enclosing: &mut Vec<Var>, used: &mut BTreeSet<Var>| {
        let mut inner = map.clone();
        let mut out = Vec::new();
        for x in vars {
            let y = if free.contains(x) || enclosing.contains(x) {
                fresh_var(x.name(), used)
            } else {
                x.clone()
            };
            inner.insert(x.clone(), y.clone());
            out.push(y);
        }
        (out, inner)
    };
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => Formula::Atom(Atom::new(a.lhs.rename(map), a.rel)),
        Formula::Not(g) => Formula::not(rename_rec(g, free, enclosing, used, map)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_rec(g, free, enclosing, used, map)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_rec(g, free, enclosing, used, map)).collect()),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let (nv, inner) = bind(vs, enclosing, used);
            let n = enclosing.len();
            enclosing.extend(nv.iter().cloned());
            let body = rename_rec(g, free, enclosing, used, &inner);
            enclosing.truncate(n);
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(nv, body)
            } else {
                Formula::forall(nv, body)
            }
        }
        Formula::ExistsInf(x, g) => {
            let (mut nv, inner) = bind(std::slice::from_ref(x), enclosing, used);
            let y = nv.pop().unwrap();
            enclosing.push(y.clone());
            let body = rename_rec(g, free, enclosing, used, &inner);
            enclosing.pop();
            Formula::exists_inf(y, body)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    #[test]
    fn parses_exists_with_lam() {
        let f = parse_formula("(exists (x) (< (lam t/(t+1) x) y))").unwrap();
        let expected = Formula::exists(
            vec![Var::new("x")],
            Atom::lt(LinearTerm::scaled_var(rf("t/(t+1)"), "x").sub(&LinearTerm::var("y"))).into(),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn cancellation_at_parse() {
        let f = parse_formula("(= (+ x (neg x)) 0)").unwrap();
        assert_eq!(f, Atom::eq(LinearTerm::zero()).into());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(parse_term("(lam t/0 x)"), Err(Error::ZeroDenominator));
    }

    #[test]
    fn prefix_rational_function_literal() {
        let f = parse_formula("(> (lam (- t 100) one) (const 0))").unwrap();
        let expected: Formula = Atom::lt(LinearTerm::constant(rf("100-t"))).into();
        assert_eq!(f, expected);
    }

    #[test]
    fn parse_error_positions() {
        let err = parse_formula("(and\n  (< x (lam t/(1+ y) x)))").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_formula("(exists-inf (x y) (< x y))").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn alpha_renaming_separates_bound_from_free() {
        let f = parse_formula("(and (< x 0) (exists (x) (< x y)))").unwrap();
        let Formula::And(parts) = &f else { panic!() };
        let Formula::Exists(vs, _) = &parts[1] else { panic!() };
        assert_ne!(vs[0], Var::new("x"));
        assert!(f.free_vars().contains(&Var::new("x")));
        let g = parse_formula("(exists (x) (forall (x) (< x 0)))").unwrap();
        let Formula::Exists(outer, body) = &g else { panic!() };
        let Formula::Forall(inner, _) = body.as_ref() else { panic!() };
        assert_ne!(outer, inner);
    }

    #[test]
    fn sentences_reject_free_variables() {
        assert_eq!(parse_sentence("(< x 0)"), Err(Error::UnboundVariable("x".into())));
        assert!(parse_sentence("(forall (x) (< x (+ x one)))").is_ok());
    }

    #[test]
    fn parse_dispatches_term_or_formula() {
        assert!(matches!(parse("(+ x y)").unwrap(), Parsed::Term(_)));
        assert!(matches!(parse("(< x y)").unwrap(), Parsed::Formula(_)));
        assert!(matches!(parse("true").unwrap(), Parsed::Formula(Formula::True)));
    }
}
