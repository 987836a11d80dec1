//! The lazily extended structure: generators with partial assignments and
//! Q(t)-combinations of them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use rand::Rng;

use super::value::{GenericValue, Value};
use crate::error::{Error, Result};
use crate::logic::{eval_qf, Formula, LinearTerm, Rel, Var};
use crate::qe::{Completion, Sign};
use crate::qfield::{q_basis, Rational, RationalFunction};

/// `Σ combo[g]·g + one·1`, no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelElement {
    pub combo: BTreeMap<usize, RationalFunction>,
    pub one: RationalFunction,
}

impl ModelElement {
    pub fn zero() -> Self {
        ModelElement::default()
    }

    pub fn one() -> Self {
        Self::constant(RationalFunction::one())
    }

    /// `λ_q(1)`.
    pub fn constant(q: RationalFunction) -> Self {
        ModelElement {
            combo: BTreeMap::new(),
            one: q,
        }
    }

    pub fn generator(id: usize) -> Self {
        let mut combo = BTreeMap::new();
        combo.insert(id, RationalFunction::one());
        ModelElement {
            combo,
            one: RationalFunction::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.combo.is_empty() && self.one.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut combo = self.combo.clone();
        for (g, q) in &other.combo {
            let s = combo.get(g).map_or_else(|| q.clone(), |p| p.add(q));
            if s.is_zero() {
                combo.remove(g);
            } else {
                combo.insert(*g, s);
            }
        }
        ModelElement {
            combo,
            one: self.one.add(&other.one),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&RationalFunction::from_i64(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `λ_q` applied to the element.
    pub fn scale(&self, q: &RationalFunction) -> Self {
        if q.is_zero() {
            return ModelElement::zero();
        }
        ModelElement {
            combo: self.combo.iter().map(|(g, p)| (*g, p.mul(q))).collect(),
            one: self.one.mul(q),
        }
    }

    /// Coordinates over `1, g_0, …, g_{n-1}`.
    pub fn coordinates(&self, n: usize) -> Vec<RationalFunction> {
        std::iter::once(self.one.clone())
            .chain((0..n).map(|g| self.combo.get(&g).cloned().unwrap_or_else(RationalFunction::zero)))
            .collect()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.combo.keys().next_back().copied()
    }
}

impl ModelElement {
    /// Read a term over `one` and generator names `g0`, `g1`, … as written
    /// by `Display`.
    pub fn from_term(t: &LinearTerm) -> Result<ModelElement> {
        let mut e = ModelElement::constant(t.constant_part().clone());
        for (x, q) in t.coeffs() {
            let id = x
                .name()
                .strip_prefix('g')
                .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::UnboundVariable(x.name().to_string()))?;
            e = e.add(&ModelElement::generator(id).scale(q));
        }
        Ok(e)
    }
}

impl std::fmt::Display for ModelElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self
            .combo
            .iter()
            .map(|(g, q)| if q.is_one() { format!("g{g}") } else { format!("(lam {q} g{g})") })
            .collect();
        if !self.one.is_zero() {
            parts.push(if self.one.is_one() { "one".into() } else { format!("(lam {} one)", self.one) });
        }
        match parts.len() {
            0 => f.write_str("0"),
            1 => f.write_str(&parts[0]),
            _ => write!(f, "(+ {})", parts.join(" ")),
        }
    }
}

/// A generator: values of `λ_d(g)` for a Q-independent list of directions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Generator {
    pub id: usize,
    pub assignment: Vec<(RationalFunction, GenericValue)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSession {
    pub generators: Vec<Generator>,
    next_eps: u64,
    pub completion: Completion,
    pub seed: u64,
}

impl ModelSession {
    pub fn new(completion: Completion, seed: u64) -> Self {
        ModelSession {
            generators: Vec::new(),
            next_eps: 0,
            completion,
            seed,
        }
    }

    pub fn next_eps(&self) -> u64 {
        self.next_eps
    }

    pub fn fresh_eps(&mut self) -> u64 {
        let i = self.next_eps;
        self.next_eps += 1;
        i
    }

    pub fn generator(&self, id: usize) -> Option<&Generator> {
        self.generators.get(id)
    }

    /// A new generator with the given independent directions and values.
    /// Register empty generators until `g{id}` exists.
    pub fn ensure_generators(&mut self, id: usize) {
        while self.generators.len() <= id {
            let n = self.generators.len();
            self.generators.push(Generator {
                id: n,
                assignment: Vec::new(),
            });
        }
    }

    pub fn add_generator(&mut self, assignment: Vec<(RationalFunction, GenericValue)>) -> Result<ModelElement> {
        let dirs: Vec<RationalFunction> = assignment.iter().map(|(d, _)| d.clone()).collect();
        if q_basis(&dirs).rank() != dirs.len() {
            return Err(Error::DependentDirections);
        }
        let id = self.generators.len();
        self.generators.push(Generator { id, assignment });
        Ok(ModelElement::generator(id))
    }

    /// `λ_q(g)`, materializing `q` with a fresh infinitesimal if it lies
    /// outside the span of the assigned directions.
    pub fn direction_value(&mut self, g: usize, q: &RationalFunction) -> Result<GenericValue> {
        if q.is_zero() {
            return Ok(GenericValue::default());
        }
        let gen = self
            .generators
            .get(g)
            .ok_or_else(|| Error::UnknownSymbol(format!("g{g}")))?;
        let mut dirs: Vec<RationalFunction> = gen.assignment.iter().map(|(d, _)| d.clone()).collect();
        dirs.push(q.clone());
        let dec = q_basis(&dirs);
        if dec.rank() == dirs.len() {
            // materialize the direction with positive leading ratio so the
            // answer does not depend on which sign was asked first
            let v = GenericValue::with_eps(Rational::zero(), self.fresh_eps());
            let (key, v_q) = if q.leading_ratio() < Rational::zero() {
                (q.neg(), v.neg())
            } else {
                (q.clone(), v.clone())
            };
            self.generators[g].assignment.push((key, v));
            return Ok(v_q);
        }
        let row = dec.matrix.last().expect("nonempty");
        Ok(gen
            .assignment
            .iter()
            .zip(row)
            .fold(GenericValue::default(), |acc, ((_, v), c)| acc.add(&v.scale(c))))
    }

    pub fn element_value(&mut self, e: &ModelElement) -> Result<Value> {
        let mut v = Value::constant(e.one.clone());
        for (g, q) in &e.combo {
            v = v.add(&Value::from(&self.direction_value(*g, q)?));
        }
        Ok(v)
    }

    pub fn term_element(&self, t: &LinearTerm, env: &BTreeMap<Var, ModelElement>) -> Result<ModelElement> {
        let mut e = ModelElement::constant(t.constant_part().clone());
        for (x, q) in t.coeffs() {
            let ex = env.get(x).ok_or_else(|| Error::UnboundVariable(x.name().to_string()))?;
            e = e.add(&ex.scale(q));
        }
        Ok(e)
    }

    pub fn eval_term(&mut self, t: &LinearTerm, env: &BTreeMap<Var, ModelElement>) -> Result<Value> {
        let e = self.term_element(t, env)?;
        self.element_value(&e)
    }

    pub fn sign_of(&mut self, e: &ModelElement) -> Result<Sign> {
        let c = self.completion;
        Ok(self.element_value(e)?.sign(&c))
    }

    /// Evaluate a quantifier-free formula.
    pub fn eval_formula(&mut self, f: &Formula, env: &BTreeMap<Var, ModelElement>) -> Result<bool> {
        if let Some(x) = f.free_vars().into_iter().find(|x| !env.contains_key(x)) {
            return Err(Error::UnboundVariable(x.name().to_string()));
        }
        let mut err = None;
        let r = eval_qf(f, &mut |a| {
            let e = match self.term_element(&a.lhs, env) {
                Ok(e) => e,
                Err(e) => {
                    err.get_or_insert(e);
                    return false;
                }
            };
            match a.rel {
                Rel::Eq => e.is_zero(),
                Rel::Ne => !e.is_zero(),
                Rel::Lt => match self.sign_of(&e) {
                    Ok(s) => s == Sign::Neg,
                    Err(e) => {
                        err.get_or_insert(e);
                        false
                    }
                },
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    /// A fresh generator with `λ_{q_i}(g) ∈ boxes[i]`: each direction gets
    /// the box center plus its own infinitesimal.
    pub fn witness_in_boxes(&mut self, qs: &[RationalFunction], boxes: &[(Rational, Rational)]) -> Result<ModelElement> {
        if qs.len() != boxes.len() {
            return Err(Error::DimensionMismatch(format!("{} directions, {} boxes", qs.len(), boxes.len())));
        }
        if q_basis(qs).rank() != qs.len() {
            return Err(Error::DependentDirections);
        }
        if let Some((lo, hi)) = boxes.iter().find(|(lo, hi)| lo >= hi) {
            return Err(Error::EmptyBox(format!("({lo}, {hi})")));
        }
        let assignment = qs
            .iter()
            .zip(boxes)
            .map(|(q, (lo, hi))| {
                let center = (lo + hi) / Rational::from_integer(2.into());
                (q.clone(), GenericValue::with_eps(center, self.fresh_eps()))
            })
            .collect();
        let g = self.add_generator(assignment)?;
        for (q, (lo, hi)) in qs.iter().zip(boxes) {
            let v = self.element_value(&g.scale(q))?;
            let c = self.completion;
            assert!(
                Value::rational(lo.clone()).cmp_in(&v, &c).is_lt() && v.cmp_in(&Value::rational(hi.clone()), &c).is_lt(),
                "witness postcondition"
            );
        }
        Ok(g)
    }

    /// A random element for property tests: either a fresh generator with
    /// random values on the directions `1` and `t`, or a small combination
    /// of existing generators and `1`.
    pub fn sample_element(&mut self, rng: &mut impl Rng) -> ModelElement {
        let small = |rng: &mut dyn rand::RngCore| -> Rational {
            Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=3).into())
        };
        if self.generators.is_empty() || rng.gen_bool(0.5) {
            let a = small(rng);
            let b = small(rng);
            let i = self.fresh_eps();
            let j = self.fresh_eps();
            return self
                .add_generator(vec![
                    (RationalFunction::one(), GenericValue::with_eps(a, i)),
                    (RationalFunction::t(), GenericValue::with_eps(b, j)),
                ])
                .expect("1 and t are independent");
        }
        let g = rng.gen_range(0..self.generators.len());
        let mut e = ModelElement::generator(g).scale(&crate::sample::random_rf(rng, 1, 3));
        if rng.gen_bool(0.5) {
            e = e.add(&ModelElement::constant(RationalFunction::from_rational(small(rng))));
        }
        if e.is_zero() {
            ModelElement::generator(g)
        } else {
            e
        }
    }

    /// Deterministic text record of the session.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "session v1").unwrap();
        writeln!(s, "completion {}", self.completion).unwrap();
        writeln!(s, "seed {}", self.seed).unwrap();
        writeln!(s, "next-eps {}", self.next_eps).unwrap();
        for g in &self.generators {
            writeln!(s, "gen {}", g.id).unwrap();
            for (d, v) in &g.assignment {
                write!(s, "  dir {d} = {}", v.rational).unwrap();
                for (i, c) in &v.eps {
                    write!(s, " {i}:{c}").unwrap();
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn restore(text: &str) -> Result<Self> {
        let bad = |n: usize, m: &str| Error::SessionFormat(format!("line {}: {m}", n + 1));
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, "session v1")) => {}
            _ => return Err(Error::SessionFormat("missing `session v1` header".into())),
        }
        let mut field = |name: &str| -> Result<String> {
            let (n, l) = lines.next().ok_or_else(|| Error::SessionFormat(format!("missing `{name}`")))?;
            l.strip_prefix(name)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| bad(n, &format!("expected `{name}`")))
        };
        let completion: Completion = field("completion")?.parse().map_err(|_| Error::SessionFormat("bad completion".into()))?;
        let seed: u64 = field("seed")?.parse().map_err(|_| Error::SessionFormat("bad seed".into()))?;
        let next_eps: u64 = field("next-eps")?.parse().map_err(|_| Error::SessionFormat("bad next-eps".into()))?;
        let mut s = ModelSession::new(completion, seed);
        s.next_eps = next_eps;
        for (n, l) in lines {
            if let Some(id) = l.strip_prefix("gen ") {
                let id: usize = id.trim().parse().map_err(|_| bad(n, "bad generator id"))?;
                if id != s.generators.len() {
                    return Err(bad(n, "generator ids must be consecutive"));
                }
                s.generators.push(Generator { id, assignment: Vec::new() });
            } else if let Some(rest) = l.trim_start().strip_prefix("dir ") {
                let (d, v) = rest.split_once(" = ").ok_or_else(|| bad(n, "expected `dir <rf> = <value>`"))?;
                let d = RationalFunction::parse(d).map_err(|_| bad(n, "bad direction"))?;
                let mut parts = v.split_whitespace();
                let rational: Rational = parts.next().and_then(|r| r.parse().ok()).ok_or_else(|| bad(n, "bad rational"))?;
                let mut eps = BTreeMap::new();
                for p in parts {
                    let (i, c) = p.split_once(':').ok_or_else(|| bad(n, "bad eps entry"))?;
                    let i: u64 = i.parse().map_err(|_| bad(n, "bad eps index"))?;
                    if i >= next_eps {
                        return Err(bad(n, "eps index beyond next-eps"));
                    }
                    eps.insert(i, c.parse().map_err(|_| bad(n, "bad eps coefficient"))?);
                }
                let g = s.generators.last_mut().ok_or_else(|| bad(n, "`dir` before `gen`"))?;
                g.assignment.push((d, GenericValue { rational, eps }));
            } else {
                return Err(bad(n, "unrecognized line"));
            }
        }
        Ok(s)
    }
}
