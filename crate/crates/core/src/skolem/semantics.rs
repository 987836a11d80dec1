//! Eligibility codes, axiom instances and finite checks of Skolem
//! interpretations.

use std::collections::{BTreeMap, BTreeSet};

use super::signature::{SkolemSignature, Theta};
use super::syntax::{ChainStep, SkFormula, TermChain, UniformConfiguration};
use crate::error::{Error, Result};
use crate::logic::{fresh_var, Atom, Formula, LinearTerm, Var};
use crate::model::{ModelElement, ModelSession};
use crate::qe::elim_quantifiers;

/// Rename every binder of `f` to a name outside `used`.
fn freshen_bound(f: &Formula, used: &mut BTreeSet<Var>) -> Formula {
    let rebind = |vs: &[Var], g: &Formula, used: &mut BTreeSet<Var>| {
        let mut body = g.clone();
        let nvs: Vec<Var> = vs
            .iter()
            .map(|v| {
                let n = fresh_var(v.name(), used);
                body = body.substitute(v, &LinearTerm::var(n.clone()));
                n
            })
            .collect();
        (nvs, freshen_bound(&body, used))
    };
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(freshen_bound(g, used)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| freshen_bound(g, used)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| freshen_bound(g, used)).collect()),
        Formula::Exists(vs, g) => {
            let (vs, g) = rebind(vs, g, used);
            Formula::exists(vs, g)
        }
        Formula::Forall(vs, g) => {
            let (vs, g) = rebind(vs, g, used);
            Formula::forall(vs, g)
        }
        Formula::ExistsInf(x, g) => {
            let (vs, g) = rebind(std::slice::from_ref(x), g, used);
            Formula::exists_inf(vs.into_iter().next().unwrap(), g)
        }
    }
}

/// `θ(args, y)` without capture.
pub fn instantiate(theta: &Theta, args: &[Var], y: &Var) -> Formula {
    let mut used: BTreeSet<Var> = theta.body.all_vars();
    used.extend(args.iter().cloned());
    used.insert(y.clone());
    used.extend(theta.xs.iter().cloned());
    used.insert(theta.y.clone());
    let body = freshen_bound(&theta.body, &mut used);
    let map: BTreeMap<Var, Var> = theta
        .xs
        .iter()
        .cloned()
        .zip(args.iter().cloned())
        .chain(std::iter::once((theta.y.clone(), y.clone())))
        .collect();
    body.rename_all(&map)
}

fn var_eq(a: &Var, b: &Var) -> Formula {
    Formula::Atom(Atom::eq(LinearTerm::var(a.clone()).sub(&LinearTerm::var(b.clone()))))
}

/// `χ'`: the Skolem structure may be altered so that `χ` holds. Each
/// conjunct needs `∃w θ(args, w) → θ(args, out)`, and two conjuncts of one
/// symbol with equal arguments need equal outputs.
pub fn eligibility_code(sig: &SkolemSignature, chi: &UniformConfiguration) -> Result<Formula> {
    chi.check(sig)?;
    let eqs = chi.equations();
    let mut used: BTreeSet<Var> = chi.vars.iter().cloned().collect();
    let w = fresh_var("w", &mut used);
    let mut parts = Vec::new();
    for e in &eqs {
        let theta = &sig.lookup(&e.symbol)?.theta;
        parts.push(Formula::implies(
            Formula::exists(vec![w.clone()], instantiate(theta, &e.args, &w)),
            instantiate(theta, &e.args, &e.out),
        ));
    }
    for (i, a) in eqs.iter().enumerate() {
        for b in &eqs[i + 1..] {
            if a.symbol != b.symbol || a.out == b.out {
                continue;
            }
            let mut same: Vec<Formula> = a.args.iter().zip(&b.args).filter(|(p, q)| p != q).map(|(p, q)| var_eq(p, q)).collect();
            let conclusion = var_eq(&a.out, &b.out);
            let premise = match same.len() {
                0 => None,
                1 => same.pop(),
                _ => Some(Formula::And(same)),
            };
            parts.push(match premise {
                None => conclusion,
                Some(p) => Formula::implies(p, conclusion),
            });
        }
    }
    Ok(match parts.len() {
        0 => Formula::True,
        1 => parts.pop().unwrap(),
        _ => Formula::And(parts),
    })
}

/// Source of `χ'` for axiom instances; [`eligibility_code`] is the default.
pub trait EligibilityCoder {
    fn code(&self, sig: &SkolemSignature, chi: &UniformConfiguration) -> Result<Formula>;
}

/// Witness preservation plus functionality, as in [`eligibility_code`].
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultEligibility;

impl EligibilityCoder for DefaultEligibility {
    fn code(&self, sig: &SkolemSignature, chi: &UniformConfiguration) -> Result<Formula> {
        eligibility_code(sig, chi)
    }
}

/// `∀x_1…x_k ((∃^∞x_{k+1}…∃^∞x_n (φ ∧ χ')) → ∃x_{k+1}…x_n (φ ∧ χ))`.
pub fn axiom_instance(
    sig: &SkolemSignature,
    vars: &[Var],
    phi: &Formula,
    chi: &UniformConfiguration,
    k: usize,
) -> Result<SkFormula> {
    axiom_instance_with(&DefaultEligibility, sig, vars, phi, chi, k)
}

/// [`axiom_instance`] with `χ'` from `coder`.
pub fn axiom_instance_with(
    coder: &dyn EligibilityCoder,
    sig: &SkolemSignature,
    vars: &[Var],
    phi: &Formula,
    chi: &UniformConfiguration,
    k: usize,
) -> Result<SkFormula> {
    if k >= vars.len() {
        return Err(Error::ArityMismatch(format!("k = {k} needs more than {k} variables, got {}", vars.len())));
    }
    let declared: BTreeSet<&Var> = vars.iter().collect();
    if declared.len() != vars.len() {
        return Err(Error::ArityMismatch("repeated variable".into()));
    }
    if let Some(v) = phi.free_vars().iter().chain(&chi.vars).find(|v| !declared.contains(v)) {
        return Err(Error::UnboundVariable(v.name().to_string()));
    }
    chi.check(sig)?;
    let chi_prime = coder.code(sig, chi)?;
    let mut lhs = SkFormula::Base(Formula::and([phi.clone(), chi_prime]));
    for x in vars[k..].iter().rev() {
        lhs = SkFormula::ExistsInf(x.clone(), Box::new(lhs));
    }
    let rhs = SkFormula::Exists(
        vars[k..].to_vec(),
        Box::new(SkFormula::And(vec![SkFormula::Base(phi.clone()), chi.to_formula()])),
    );
    let mut out = SkFormula::Implies(Box::new(lhs), Box::new(rhs));
    if k > 0 {
        out = SkFormula::Forall(vars[..k].to_vec(), Box::new(out));
    }
    Ok(out.normalized())
}

/// A finite part of an interpretation of the Skolem symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkolemTable {
    pub entries: BTreeMap<(String, Vec<ModelElement>), ModelElement>,
}

impl SkolemTable {
    pub fn get(&self, symbol: &str, args: &[ModelElement]) -> Result<&ModelElement> {
        self.entries.get(&(symbol.to_string(), args.to_vec())).ok_or_else(|| {
            let shown: Vec<String> = args.iter().map(ToString::to_string).collect();
            Error::MissingAssignment(format!("{symbol}({})", shown.join(", ")))
        })
    }

    pub fn set(&mut self, symbol: &str, args: Vec<ModelElement>, value: ModelElement) {
        self.entries.insert((symbol.to_string(), args), value);
    }
}

fn eval_base(s: &mut ModelSession, f: &Formula, env: &BTreeMap<Var, ModelElement>) -> Result<bool> {
    if f.is_quantifier_free() {
        s.eval_formula(f, env)
    } else {
        s.eval_formula(&elim_quantifiers(f)?.formula, env)
    }
}

/// Evaluate an `SkFormula` whose Skolem equations are not under
/// quantifiers.
pub fn eval_sk(s: &mut ModelSession, table: &SkolemTable, f: &SkFormula, env: &BTreeMap<Var, ModelElement>) -> Result<bool> {
    let lookup = |v: &Var| env.get(v).cloned().ok_or_else(|| Error::UnboundVariable(v.name().to_string()));
    match f {
        SkFormula::Base(g) => eval_base(s, g, env),
        SkFormula::Eq(e) => {
            let args = e.args.iter().map(lookup).collect::<Result<Vec<_>>>()?;
            Ok(*table.get(&e.symbol, &args)? == lookup(&e.out)?)
        }
        SkFormula::Not(g) => Ok(!eval_sk(s, table, g, env)?),
        SkFormula::And(gs) => {
            for g in gs {
                if !eval_sk(s, table, g, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SkFormula::Or(gs) => {
            for g in gs {
                if eval_sk(s, table, g, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        SkFormula::Implies(a, b) => Ok(!eval_sk(s, table, a, env)? || eval_sk(s, table, b, env)?),
        _ => Err(Error::NotQuantifierFree),
    }
}

/// Outputs of the chain at `xs`, reading Skolem steps from `table`.
pub fn eval_chain(s: &ModelSession, chain: &TermChain, table: &SkolemTable, xs: &[ModelElement]) -> Result<Vec<ModelElement>> {
    if xs.len() != chain.xs.len() {
        return Err(Error::ArityMismatch(format!("chain takes {} input(s), got {}", chain.xs.len(), xs.len())));
    }
    let mut env: BTreeMap<Var, ModelElement> = chain.xs.iter().cloned().zip(xs.iter().cloned()).collect();
    let mut out = Vec::with_capacity(chain.steps.len());
    for (i, step) in chain.steps.iter().enumerate() {
        let v = match step {
            ChainStep::Skolem { symbol, args } => {
                let args: Vec<ModelElement> = args.iter().map(|a| env[chain.arg_var(a)].clone()).collect();
                table.get(symbol, &args)?.clone()
            }
            ChainStep::Base(t) => s.term_element(t, &env)?,
        };
        env.insert(chain.ys[i].clone(), v.clone());
        out.push(v);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub symbol: String,
    pub args: Vec<ModelElement>,
    pub value: ModelElement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteCheckReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl FiniteCheckReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// At every point where `∃y θ_f(ā, y)` holds, check `θ_f(ā, table[f](ā))`.
pub fn check_finite_model(
    s: &mut ModelSession,
    sig: &SkolemSignature,
    table: &SkolemTable,
    points: &[Vec<ModelElement>],
) -> Result<FiniteCheckReport> {
    let mut report = FiniteCheckReport::default();
    for f in &sig.fns {
        let th = &f.theta;
        let exists = elim_quantifiers(&Formula::exists(vec![th.y.clone()], th.body.clone()))?.formula;
        let body = elim_quantifiers(&th.body)?.formula;
        for p in points.iter().filter(|p| p.len() == th.arity()) {
            let mut env: BTreeMap<Var, ModelElement> = th.xs.iter().cloned().zip(p.iter().cloned()).collect();
            if !s.eval_formula(&exists, &env)? {
                continue;
            }
            report.checked += 1;
            let value = table.get(&f.name, p)?.clone();
            env.insert(th.y.clone(), value.clone());
            if !s.eval_formula(&body, &env)? {
                report.violations.push(Violation {
                    symbol: f.name.clone(),
                    args: p.clone(),
                    value,
                });
            }
        }
    }
    Ok(report)
}
