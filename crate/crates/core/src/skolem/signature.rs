//! Skolem signatures over a base language and their level-by-level
//! iteration.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::sexp::{read_one, Sexp};
use crate::logic::{alpha_rename, formula_from_sexp, is_identifier, print_canonical, variable_from_sexp, Formula, Var};

/// `θ(xs, y)` with a single witness variable `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    pub xs: Vec<Var>,
    pub y: Var,
    pub body: Formula,
}

impl Theta {
    pub fn new(xs: Vec<Var>, y: Var, body: Formula) -> Result<Self> {
        let t = Theta { xs, y, body };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.xs.contains(&self.y) {
            return Err(Error::MalformedTheta(format!("witness variable `{}` is also an argument", self.y)));
        }
        let distinct: BTreeSet<&Var> = self.xs.iter().collect();
        if distinct.len() != self.xs.len() {
            return Err(Error::MalformedTheta("repeated argument variable".into()));
        }
        let allowed: BTreeSet<Var> = self.xs.iter().cloned().chain(std::iter::once(self.y.clone())).collect();
        if let Some(v) = self.body.free_vars().into_iter().find(|v| !allowed.contains(v)) {
            return Err(Error::MalformedTheta(format!("variable `{v}` is neither an argument nor the witness")));
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.xs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemFn {
    pub name: String,
    pub theta: Theta,
}

impl SkolemFn {
    pub fn arity(&self) -> usize {
        self.theta.arity()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemSignature {
    pub level: usize,
    pub base: String,
    pub fns: Vec<SkolemFn>,
}

const RESERVED: &[&str] = &[
    "one", "true", "false", "lam", "neg", "const", "and", "or", "not", "implies", "iff", "exists", "forall", "exists-inf",
    "theta", "config", "chain", "signature", "skolem-fn", "level", "base",
];

impl SkolemSignature {
    /// The base language `L_t` with no Skolem symbols.
    pub fn base() -> Self {
        SkolemSignature {
            level: 0,
            base: "L_t".into(),
            fns: Vec::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&SkolemFn> {
        self.fns.iter().find(|f| f.name == name)
    }

    pub fn lookup(&self, name: &str) -> Result<&SkolemFn> {
        self.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Declare a named symbol at the current level.
    pub fn declare(&mut self, name: &str, theta: Theta) -> Result<()> {
        if !is_identifier(name) || RESERVED.contains(&name) {
            return Err(Error::MalformedTheta(format!("`{name}` is not a usable function name")));
        }
        if self.is_symbol(name) {
            return Err(Error::MalformedTheta(format!("`{name}` is already declared")));
        }
        theta.validate()?;
        self.fns.push(SkolemFn {
            name: name.to_string(),
            theta,
        });
        Ok(())
    }

    pub fn to_sexp_string(&self) -> String {
        let mut s = format!("(signature (level {}) (base {})", self.level, self.base);
        for f in &self.fns {
            s.push_str("\n  ");
            s.push_str(&skolem_fn_string(f));
        }
        s.push(')');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_sexp(&read_one(text)?)
    }

    pub fn from_sexp(e: &Sexp) -> Result<Self> {
        let items = match (e.head(), e.as_list()) {
            (Some("signature"), Some(items)) => items,
            _ => return Err(e.error("expected `(signature …)`")),
        };
        let mut sig = SkolemSignature::base();
        for it in &items[1..] {
            match it.head() {
                Some("level") => {
                    sig.level = it
                        .as_list()
                        .and_then(|l| l.get(1))
                        .and_then(Sexp::as_atom)
                        .and_then(|a| a.parse().ok())
                        .ok_or_else(|| it.error("expected `(level <n>)`"))?;
                }
                Some("base") => {
                    sig.base = it
                        .as_list()
                        .and_then(|l| l.get(1))
                        .and_then(Sexp::as_atom)
                        .ok_or_else(|| it.error("expected `(base <tag>)`"))?
                        .to_string();
                }
                Some("skolem-fn") => {
                    let (name, theta) = skolem_fn_from_sexp(it)?;
                    sig.declare(&name, theta)?;
                }
                _ => return Err(it.error("expected `level`, `base` or `skolem-fn`")),
            }
        }
        Ok(sig)
    }
}

impl fmt::Display for SkolemSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp_string())
    }
}

pub fn skolem_fn_string(f: &SkolemFn) -> String {
    let xs: Vec<&str> = f.theta.xs.iter().map(Var::name).collect();
    format!(
        "(skolem-fn {} ({}) (theta {} {}))",
        f.name,
        xs.join(" "),
        f.theta.y,
        print_canonical(&f.theta.body)
    )
}

/// `(skolem-fn F (x …) (theta y φ))`
pub fn skolem_fn_from_sexp(e: &Sexp) -> Result<(String, Theta)> {
    let items = e.as_list().unwrap_or(&[]);
    if items.len() != 4 {
        return Err(e.error("expected `(skolem-fn <name> (<vars>) (theta <y> <formula>))`"));
    }
    let name = items[1].as_atom().ok_or_else(|| items[1].error("expected a function name"))?;
    let xs = items[2]
        .as_list()
        .ok_or_else(|| items[2].error("expected an argument list"))?
        .iter()
        .map(variable_from_sexp)
        .collect::<Result<Vec<_>>>()?;
    let th = items[3].as_list().filter(|_| items[3].head() == Some("theta"));
    let th = th.filter(|l| l.len() == 3).ok_or_else(|| items[3].error("expected `(theta <y> <formula>)`"))?;
    let y = variable_from_sexp(&th[1])?;
    let body = alpha_rename(&formula_from_sexp(&th[2])?);
    Ok((name.to_string(), Theta::new(xs, y, body)?))
}

/// Next-level signature with one fresh symbol `f{level}_{i}` per formula.
pub fn iterate_language(sig: &SkolemSignature, new_thetas: &[Theta]) -> Result<SkolemSignature> {
    for t in new_thetas {
        t.validate()?;
    }
    let mut next = sig.clone();
    next.level += 1;
    let mut i = 0usize;
    for t in new_thetas {
        let name = loop {
            let candidate = format!("f{}_{}", next.level, i);
            i += 1;
            if !next.is_symbol(&candidate) {
                break candidate;
            }
        };
        next.fns.push(SkolemFn {
            name,
            theta: t.clone(),
        });
    }
    Ok(next)
}
