//! Formulas of the Skolem expansion, uniform configurations and term
//! chains.

use std::collections::BTreeSet;
use std::fmt;

use super::signature::SkolemSignature;
use crate::error::{Error, Result};
use crate::logic::sexp::{read_one, Sexp};
use crate::logic::{formula_from_sexp, print_canonical, print_term, term_from_sexp, variable_from_sexp, Atom, Formula, LinearTerm, Var};

/// `symbol(args) = out`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SkEq {
    pub symbol: String,
    pub args: Vec<Var>,
    pub out: Var,
}

impl fmt::Display for SkEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(= ({}", self.symbol)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ") {})", self.out)
    }
}

/// Formulas over `L_t` plus Skolem equations. Skolem-free subformulas are
/// kept whole in `Base`; see [`SkFormula::normalized`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkFormula {
    Base(Formula),
    Eq(SkEq),
    Not(Box<SkFormula>),
    And(Vec<SkFormula>),
    Or(Vec<SkFormula>),
    Implies(Box<SkFormula>, Box<SkFormula>),
    Exists(Vec<Var>, Box<SkFormula>),
    Forall(Vec<Var>, Box<SkFormula>),
    ExistsInf(Var, Box<SkFormula>),
}

impl SkFormula {
    pub fn as_base(&self) -> Option<&Formula> {
        match self {
            SkFormula::Base(f) => Some(f),
            _ => None,
        }
    }

    /// Collapse every Skolem-free subtree into a single `Base` node.
    pub fn normalized(&self) -> SkFormula {
        use SkFormula as S;
        let all_base = |gs: &[S]| gs.iter().all(|g| matches!(g, S::Base(_)));
        let bases = |gs: Vec<S>| gs.into_iter().map(|g| match g {
            S::Base(f) => f,
            _ => unreachable!(),
        });
        match self {
            S::Base(_) | S::Eq(_) => self.clone(),
            S::Not(g) => match g.normalized() {
                S::Base(f) => S::Base(Formula::Not(Box::new(f))),
                g => S::Not(Box::new(g)),
            },
            S::And(gs) | S::Or(gs) => {
                let gs: Vec<S> = gs.iter().map(S::normalized).collect();
                let and = matches!(self, S::And(_));
                if all_base(&gs) {
                    let fs: Vec<Formula> = bases(gs).collect();
                    S::Base(if and { Formula::And(fs) } else { Formula::Or(fs) })
                } else if and {
                    S::And(gs)
                } else {
                    S::Or(gs)
                }
            }
            S::Implies(a, b) => match (a.normalized(), b.normalized()) {
                (S::Base(a), S::Base(b)) => S::Base(Formula::implies(a, b)),
                (a, b) => S::Implies(Box::new(a), Box::new(b)),
            },
            S::Exists(vs, g) | S::Forall(vs, g) => {
                let g = g.normalized();
                let ex = matches!(self, S::Exists(..));
                match g {
                    S::Base(f) if ex => S::Base(Formula::Exists(vs.clone(), Box::new(f))),
                    S::Base(f) => S::Base(Formula::Forall(vs.clone(), Box::new(f))),
                    g if ex => S::Exists(vs.clone(), Box::new(g)),
                    g => S::Forall(vs.clone(), Box::new(g)),
                }
            }
            S::ExistsInf(x, g) => match g.normalized() {
                S::Base(f) => S::Base(Formula::ExistsInf(x.clone(), Box::new(f))),
                g => S::ExistsInf(x.clone(), Box::new(g)),
            },
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Var>, out: &mut BTreeSet<Var>) {
        let with = |vs: &[Var], g: &SkFormula, out: &mut BTreeSet<Var>| {
            let mut b = bound.clone();
            b.extend(vs.iter().cloned());
            g.collect_free(&mut b, out);
        };
        match self {
            SkFormula::Base(f) => out.extend(f.free_vars().into_iter().filter(|v| !bound.contains(v))),
            SkFormula::Eq(e) => out.extend(e.args.iter().chain(std::iter::once(&e.out)).filter(|v| !bound.contains(*v)).cloned()),
            SkFormula::Not(g) => g.collect_free(bound, out),
            SkFormula::And(gs) | SkFormula::Or(gs) => gs.iter().for_each(|g| g.collect_free(bound, out)),
            SkFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            SkFormula::Exists(vs, g) | SkFormula::Forall(vs, g) => with(vs, g, out),
            SkFormula::ExistsInf(x, g) => with(std::slice::from_ref(x), g, out),
        }
    }

    /// Skolem symbols used, with the arity of each use.
    pub fn symbols(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let SkFormula::Eq(e) = f {
                out.push((e.symbol.clone(), e.args.len()));
            }
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&SkFormula)) {
        visit(self);
        match self {
            SkFormula::Base(_) | SkFormula::Eq(_) => {}
            SkFormula::Not(g) | SkFormula::Exists(_, g) | SkFormula::Forall(_, g) | SkFormula::ExistsInf(_, g) => g.walk(visit),
            SkFormula::And(gs) | SkFormula::Or(gs) => gs.iter().for_each(|g| g.walk(visit)),
            SkFormula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    pub fn parse(text: &str, sig: &SkolemSignature) -> Result<SkFormula> {
        sk_formula_from_sexp(&read_one(text)?, sig)
    }
}

fn var_list(vs: &[Var]) -> String {
    let names: Vec<&str> = vs.iter().map(Var::name).collect();
    format!("({})", names.join(" "))
}

impl fmt::Display for SkFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkFormula::Base(g) => f.write_str(&print_canonical(g)),
            SkFormula::Eq(e) => write!(f, "{e}"),
            SkFormula::Not(g) => write!(f, "(not {g})"),
            SkFormula::And(gs) | SkFormula::Or(gs) => {
                f.write_str(if matches!(self, SkFormula::And(_)) { "(and" } else { "(or" })?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                f.write_str(")")
            }
            SkFormula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            SkFormula::Exists(vs, g) => write!(f, "(exists {} {g})", var_list(vs)),
            SkFormula::Forall(vs, g) => write!(f, "(forall {} {g})", var_list(vs)),
            SkFormula::ExistsInf(x, g) => write!(f, "(exists-inf ({x}) {g})"),
        }
    }
}

fn mentions_symbol(e: &Sexp, sig: &SkolemSignature) -> bool {
    match e.as_list() {
        Some(items) => e.head().is_some_and(|h| sig.is_symbol(h)) || items.iter().any(|i| mentions_symbol(i, sig)),
        None => false,
    }
}

/// `(F a …)` with `F` a declared symbol of matching arity.
fn application(e: &Sexp, sig: &SkolemSignature) -> Result<Option<(String, Vec<Var>)>> {
    let Some(h) = e.head() else { return Ok(None) };
    let Some(sf) = sig.get(h) else { return Ok(None) };
    let items = e.as_list().unwrap_or(&[]);
    let args = items[1..].iter().map(variable_from_sexp).collect::<Result<Vec<_>>>()?;
    if args.len() != sf.arity() {
        return Err(Error::ArityMismatch(format!("`{h}` takes {} argument(s), got {}", sf.arity(), args.len())));
    }
    Ok(Some((h.to_string(), args)))
}

fn sk_eq_from_sexp(e: &Sexp, sig: &SkolemSignature) -> Result<SkEq> {
    let items = e.as_list().unwrap_or(&[]);
    if e.head() != Some("=") || items.len() != 3 {
        return Err(e.error("Skolem symbols may only appear as `(= (F args…) y)`"));
    }
    for (app, out) in [(&items[1], &items[2]), (&items[2], &items[1])] {
        if let Some((symbol, args)) = application(app, sig)? {
            return Ok(SkEq {
                symbol,
                args,
                out: variable_from_sexp(out)?,
            });
        }
    }
    Err(e.error("Skolem symbols may only appear as `(= (F args…) y)`"))
}

fn binder_vars(e: &Sexp) -> Result<Vec<Var>> {
    e.as_list().ok_or_else(|| e.error("expected a variable list"))?.iter().map(variable_from_sexp).collect()
}

pub fn sk_formula_from_sexp(e: &Sexp, sig: &SkolemSignature) -> Result<SkFormula> {
    if !mentions_symbol(e, sig) {
        return Ok(SkFormula::Base(formula_from_sexp(e)?));
    }
    let items = e.as_list().unwrap_or(&[]);
    let sub = |i: usize| sk_formula_from_sexp(&items[i], sig).map(Box::new);
    let want = |n: usize| -> Result<()> {
        if items.len() == n + 1 {
            Ok(())
        } else {
            Err(e.error(format!("expected {n} argument(s)")))
        }
    };
    match e.head().unwrap_or("") {
        "=" => Ok(SkFormula::Eq(sk_eq_from_sexp(e, sig)?)),
        "not" => want(1).and_then(|_| Ok(SkFormula::Not(sub(1)?))),
        "and" | "or" => {
            let gs = items[1..].iter().map(|g| sk_formula_from_sexp(g, sig)).collect::<Result<Vec<_>>>()?;
            Ok(if e.head() == Some("and") { SkFormula::And(gs) } else { SkFormula::Or(gs) })
        }
        "implies" => want(2).and_then(|_| Ok(SkFormula::Implies(sub(1)?, sub(2)?))),
        "exists" => want(2).and_then(|_| Ok(SkFormula::Exists(binder_vars(&items[1])?, sub(2)?))),
        "forall" => want(2).and_then(|_| Ok(SkFormula::Forall(binder_vars(&items[1])?, sub(2)?))),
        "exists-inf" => {
            want(2)?;
            let vs = binder_vars(&items[1])?;
            let mut body = *sub(2)?;
            for v in vs.into_iter().rev() {
                body = SkFormula::ExistsInf(v, Box::new(body));
            }
            Ok(body)
        }
        h => Err(e.error(format!("Skolem symbols cannot appear under `{h}`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigConjunct {
    pub symbol: String,
    pub args: Vec<usize>,
    pub out: usize,
}

/// `⋀ f(x_{i1} … x_{im}) = x_{i0}` with indices into `vars`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniformConfiguration {
    pub vars: Vec<Var>,
    pub conjuncts: Vec<ConfigConjunct>,
}

impl UniformConfiguration {
    fn index(&mut self, v: &Var) -> usize {
        match self.vars.iter().position(|w| w == v) {
            Some(i) => i,
            None => {
                self.vars.push(v.clone());
                self.vars.len() - 1
            }
        }
    }

    pub fn push(&mut self, eq: &SkEq) {
        let args = eq.args.iter().map(|a| self.index(a)).collect();
        let out = self.index(&eq.out);
        self.conjuncts.push(ConfigConjunct {
            symbol: eq.symbol.clone(),
            args,
            out,
        });
    }

    pub fn from_equations(eqs: &[SkEq]) -> Self {
        let mut c = UniformConfiguration::default();
        eqs.iter().for_each(|e| c.push(e));
        c
    }

    pub fn equations(&self) -> Vec<SkEq> {
        self.conjuncts
            .iter()
            .map(|c| SkEq {
                symbol: c.symbol.clone(),
                args: c.args.iter().map(|&i| self.vars[i].clone()).collect(),
                out: self.vars[c.out].clone(),
            })
            .collect()
    }

    pub fn to_formula(&self) -> SkFormula {
        let eqs: Vec<SkFormula> = self.equations().into_iter().map(SkFormula::Eq).collect();
        match eqs.len() {
            0 => SkFormula::Base(Formula::True),
            1 => eqs.into_iter().next().unwrap(),
            _ => SkFormula::And(eqs),
        }
    }

    pub fn check(&self, sig: &SkolemSignature) -> Result<()> {
        for c in &self.conjuncts {
            let f = sig.lookup(&c.symbol)?;
            if f.arity() != c.args.len() {
                return Err(Error::ArityMismatch(format!("`{}` takes {} argument(s), got {}", c.symbol, f.arity(), c.args.len())));
            }
        }
        Ok(())
    }

    /// `(config (= (F x) y) …)`
    pub fn parse(text: &str, sig: &SkolemSignature) -> Result<Self> {
        Self::from_sexp(&read_one(text)?, sig)
    }

    pub fn from_sexp(e: &Sexp, sig: &SkolemSignature) -> Result<Self> {
        let items = match (e.head(), e.as_list()) {
            (Some("config"), Some(items)) => items,
            _ => return Err(e.error("expected `(config …)`")),
        };
        let mut c = UniformConfiguration::default();
        for it in &items[1..] {
            if it.head() != Some("=") {
                return Err(it.error("expected `(= (F args…) y)`"));
            }
            if let Some(h) = it.as_list().and_then(|l| l.get(1)).and_then(Sexp::head) {
                sig.lookup(h)?;
            }
            c.push(&sk_eq_from_sexp(it, sig)?);
        }
        Ok(c)
    }
}

impl fmt::Display for UniformConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(config")?;
        for e in self.equations() {
            write!(f, " {e}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainArg {
    X(usize),
    Y(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep {
    Skolem { symbol: String, args: Vec<ChainArg> },
    /// A base term over the inputs and earlier outputs.
    Base(LinearTerm),
}

/// `y_i := step_i(x̄, y_1 … y_{i-1})`. Outputs are named `ys[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermChain {
    pub xs: Vec<Var>,
    pub ys: Vec<Var>,
    pub steps: Vec<ChainStep>,
}

impl TermChain {
    /// Outputs named `y1`, `y2`, … (primed until clear of the inputs).
    pub fn new(xs: Vec<Var>, steps: Vec<ChainStep>) -> Self {
        let ys = (1..=steps.len())
            .map(|i| {
                let mut name = format!("y{i}");
                while xs.iter().any(|x| x.name() == name) {
                    name.push('\'');
                }
                Var::new(name)
            })
            .collect();
        TermChain { xs, ys, steps }
    }

    pub fn arg_var(&self, a: &ChainArg) -> &Var {
        match a {
            ChainArg::X(i) => &self.xs[*i],
            ChainArg::Y(j) => &self.ys[*j],
        }
    }

    /// `(chain (x …) step …)`; a step is `(F arg …)` or a base term.
    pub fn parse(text: &str, sig: &SkolemSignature) -> Result<Self> {
        Self::from_sexp(&read_one(text)?, sig)
    }

    pub fn from_sexp(e: &Sexp, sig: &SkolemSignature) -> Result<Self> {
        let items = match (e.head(), e.as_list()) {
            (Some("chain"), Some(items)) if items.len() >= 2 => items,
            _ => return Err(e.error("expected `(chain (<inputs>) <step> …)`")),
        };
        let xs = binder_vars(&items[1])?;
        let mut chain = TermChain::new(xs, Vec::new());
        let n = items.len() - 2;
        chain.ys = TermChain::new(chain.xs.clone(), vec![ChainStep::Base(LinearTerm::zero()); n]).ys;
        for (i, it) in items[2..].iter().enumerate() {
            let step = match it.head().filter(|h| sig.is_symbol(h)) {
                Some(h) => {
                    let args = it.as_list().unwrap()[1..]
                        .iter()
                        .map(|a| {
                            let v = variable_from_sexp(a)?;
                            if let Some(k) = chain.xs.iter().position(|x| *x == v) {
                                Ok(ChainArg::X(k))
                            } else if let Some(k) = chain.ys[..i].iter().position(|y| *y == v) {
                                Ok(ChainArg::Y(k))
                            } else {
                                Err(Error::UnboundVariable(v.name().to_string()))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ChainStep::Skolem {
                        symbol: h.to_string(),
                        args,
                    }
                }
                None => ChainStep::Base(term_from_sexp(it)?),
            };
            chain.steps.push(step);
        }
        Ok(chain)
    }
}

impl fmt::Display for TermChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(chain {}", var_list(&self.xs))?;
        for s in &self.steps {
            match s {
                ChainStep::Skolem { symbol, args } => {
                    write!(f, " ({symbol}")?;
                    for a in args {
                        write!(f, " {}", self.arg_var(a))?;
                    }
                    f.write_str(")")?;
                }
                ChainStep::Base(t) => write!(f, " {}", print_term(t))?,
            }
        }
        f.write_str(")")
    }
}

/// Split a chain into its base part `φ` (`y_i = t_i` for base steps) and
/// its Skolem part `χ`, so that `(ȳ = chain(x̄)) ↔ φ ∧ χ`.
pub fn split_term_chain(sig: &SkolemSignature, chain: &TermChain) -> Result<(Formula, UniformConfiguration)> {
    if chain.ys.len() != chain.steps.len() {
        return Err(Error::ArityMismatch("one output name per step is required".into()));
    }
    let mut chi = UniformConfiguration {
        vars: chain.xs.iter().chain(&chain.ys).cloned().collect(),
        conjuncts: Vec::new(),
    };
    let mut phi = Vec::new();
    for (i, step) in chain.steps.iter().enumerate() {
        let earlier: BTreeSet<&Var> = chain.xs.iter().chain(&chain.ys[..i]).collect();
        match step {
            ChainStep::Skolem { symbol, args } => {
                let f = sig.lookup(symbol)?;
                if f.arity() != args.len() {
                    return Err(Error::ArityMismatch(format!("`{symbol}` takes {} argument(s), got {}", f.arity(), args.len())));
                }
                let mut idx = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        ChainArg::X(k) if *k < chain.xs.len() => idx.push(*k),
                        ChainArg::Y(k) if *k < i => idx.push(chain.xs.len() + k),
                        _ => return Err(Error::UnboundVariable(format!("argument of step {}", i + 1))),
                    }
                }
                chi.conjuncts.push(ConfigConjunct {
                    symbol: symbol.clone(),
                    args: idx,
                    out: chain.xs.len() + i,
                });
            }
            ChainStep::Base(t) => {
                if let Some(v) = t.vars().find(|v| !earlier.contains(v)) {
                    return Err(Error::UnboundVariable(v.name().to_string()));
                }
                phi.push(Formula::Atom(Atom::eq(LinearTerm::var(chain.ys[i].clone()).sub(t))));
            }
        }
    }
    let phi = match phi.len() {
        0 => Formula::True,
        1 => phi.pop().unwrap(),
        _ => Formula::And(phi),
    };
    Ok((phi, chi))
}
