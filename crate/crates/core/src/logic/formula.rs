use std::collections::{BTreeMap, BTreeSet};

use super::term::{LinearTerm, Var};

/// Relation of an atom `lhs ⋈ 0`.
///
/// `Ne` is the marked negated-equality literal produced by negation normal
/// form; the parser also produces it for `!=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Lt,
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub lhs: LinearTerm,
    pub rel: Rel,
}

impl Atom {
    pub fn new(lhs: LinearTerm, rel: Rel) -> Self {
        Atom { lhs, rel }
    }

    pub fn eq(lhs: LinearTerm) -> Self {
        Atom::new(lhs, Rel::Eq)
    }

    pub fn lt(lhs: LinearTerm) -> Self {
        Atom::new(lhs, Rel::Lt)
    }

    pub fn ne(lhs: LinearTerm) -> Self {
        Atom::new(lhs, Rel::Ne)
    }

    /// `a < b`
    pub fn less(a: &LinearTerm, b: &LinearTerm) -> Self {
        Atom::lt(a.sub(b))
    }

    pub fn mentions(&self, x: &Var) -> bool {
        self.lhs.mentions(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
    /// Infinitely many witnesses; binds exactly one variable.
    ExistsInf(Var, Box<Formula>),
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}

impl Formula {
    pub fn atom(lhs: LinearTerm, rel: Rel) -> Self {
        Formula::Atom(Atom::new(lhs, rel))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: impl IntoIterator<Item = Formula>) -> Self {
        Formula::And(fs.into_iter().collect())
    }

    pub fn or(fs: impl IntoIterator<Item = Formula>) -> Self {
        Formula::Or(fs.into_iter().collect())
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Or(vec![Formula::not(a), b])
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::And(vec![
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Self {
        Formula::Exists(vars, Box::new(body))
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Self {
        Formula::Forall(vars, Box::new(body))
    }

    pub fn exists_inf(x: Var, body: Formula) -> Self {
        Formula::ExistsInf(x, Box::new(body))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) | Formula::ExistsInf(..) => false,
        }
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) => f.quantifier_count(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_count).sum(),
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => vs.len() + f.quantifier_count(),
            Formula::ExistsInf(_, f) => 1 + f.quantifier_count(),
        }
    }

    pub fn atom_count(&self) -> usize {
        let mut n = 0;
        self.for_each_atom(&mut |_| n += 1);
        n
    }

    pub fn for_each_atom(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) => g.for_each_atom(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.for_each_atom(f)),
            Formula::Exists(_, g) | Formula::Forall(_, g) | Formula::ExistsInf(_, g) => g.for_each_atom(f),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for x in a.lhs.vars() {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_free(bound, out)),
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                g.collect_free(bound, out);
                bound.truncate(n);
            }
            Formula::ExistsInf(x, g) => {
                bound.push(x.clone());
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.lhs.collect_vars(out),
            Formula::Not(g) => g.collect_all(out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_all(out)),
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                out.extend(vs.iter().cloned());
                g.collect_all(out);
            }
            Formula::ExistsInf(x, g) => {
                out.insert(x.clone());
                g.collect_all(out);
            }
        }
    }

    pub fn mentions(&self, x: &Var) -> bool {
        self.free_vars().contains(x)
    }

    /// Replace free occurrences of `x`. Binders of `x` stop the substitution;
    /// the caller guarantees `replacement`'s variables are not captured.
    pub fn substitute(&self, x: &Var, replacement: &LinearTerm) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(Atom::new(a.lhs.substitute(x, replacement), a.rel)),
            Formula::Not(g) => Formula::not(g.substitute(x, replacement)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.substitute(x, replacement)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.substitute(x, replacement)).collect()),
            Formula::Exists(vs, g) if !vs.contains(x) => Formula::exists(vs.clone(), g.substitute(x, replacement)),
            Formula::Forall(vs, g) if !vs.contains(x) => Formula::forall(vs.clone(), g.substitute(x, replacement)),
            Formula::ExistsInf(y, g) if y != x => Formula::exists_inf(y.clone(), g.substitute(x, replacement)),
            _ => self.clone(),
        }
    }

    /// Rename variables everywhere (bound and free) according to `map`.
    pub fn rename_all(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let r = |x: &Var| map.get(x).cloned().unwrap_or_else(|| x.clone());
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(Atom::new(a.lhs.rename(map), a.rel)),
            Formula::Not(g) => Formula::not(g.rename_all(map)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.rename_all(map)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.rename_all(map)).collect()),
            Formula::Exists(vs, g) => Formula::exists(vs.iter().map(r).collect(), g.rename_all(map)),
            Formula::Forall(vs, g) => Formula::forall(vs.iter().map(r).collect(), g.rename_all(map)),
            Formula::ExistsInf(x, g) => Formula::exists_inf(r(x), g.rename_all(map)),
        }
    }
}

/// A variable named after `base` that is not in `used`; records it.
pub fn fresh_var(base: &str, used: &mut BTreeSet<Var>) -> Var {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    let candidate = Var::new(base);
    if !used.contains(&candidate) {
        used.insert(candidate.clone());
        return candidate;
    }
    let mut i = 1usize;
    loop {
        let v = Var::new(format!("{stem}_{i}"));
        if !used.contains(&v) {
            used.insert(v.clone());
            return v;
        }
        i += 1;
    }
}
