use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::qfield::{Rational, RationalFunction};

/// A first-order variable. The name `one` is reserved for the distinguished
/// constant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// `Σ λ_{q_i}(x_i) + λ_c(1)`, with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearTerm {
    coeffs: BTreeMap<Var, RationalFunction>,
    constant: RationalFunction,
}

impl LinearTerm {
    pub fn zero() -> Self {
        LinearTerm::default()
    }

    pub fn var(x: impl Into<Var>) -> Self {
        Self::scaled_var(RationalFunction::one(), x)
    }

    pub fn scaled_var(q: RationalFunction, x: impl Into<Var>) -> Self {
        let mut t = LinearTerm::zero();
        t.add_coeff(x.into(), &q);
        t
    }

    /// `λ_c(1)`.
    pub fn constant(c: RationalFunction) -> Self {
        LinearTerm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn one() -> Self {
        Self::constant(RationalFunction::one())
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (Var, RationalFunction)>, constant: RationalFunction) -> Self {
        let mut t = LinearTerm::constant(constant);
        for (x, q) in coeffs {
            t.add_coeff(x, &q);
        }
        t
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, RationalFunction> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &RationalFunction {
        &self.constant
    }

    pub fn coeff(&self, x: &Var) -> RationalFunction {
        self.coeffs.get(x).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn mentions(&self, x: &Var) -> bool {
        self.coeffs.contains_key(x)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    /// No variables (possibly a nonzero constant).
    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    fn add_coeff(&mut self, x: Var, q: &RationalFunction) {
        if q.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&x) {
            Some(c) => {
                let s = c.add(q);
                if s.is_zero() {
                    self.coeffs.remove(&x);
                } else {
                    *c = s;
                }
            }
            None => {
                self.coeffs.insert(x, q.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, q) in &other.coeffs {
            out.add_coeff(x.clone(), q);
        }
        out.constant = out.constant.add(&other.constant);
        out
    }

    pub fn neg(&self) -> Self {
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(x, q)| (x.clone(), q.neg())).collect(),
            constant: self.constant.neg(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `λ_q` applied to the whole term.
    pub fn scale(&self, q: &RationalFunction) -> Self {
        if q.is_zero() {
            return LinearTerm::zero();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(x, c)| (x.clone(), c.mul(q))).collect(),
            constant: self.constant.mul(q),
        }
    }

    pub fn scale_q(&self, c: &Rational) -> Self {
        self.scale(&RationalFunction::from_rational(c.clone()))
    }

    /// The term with `x`'s summand removed.
    pub fn without(&self, x: &Var) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(x);
        out
    }

    /// Replace `x` by `replacement`.
    pub fn substitute(&self, x: &Var, replacement: &LinearTerm) -> Self {
        match self.coeffs.get(x) {
            None => self.clone(),
            Some(q) => self.without(x).add(&replacement.scale(q)),
        }
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Self {
        let mut out = LinearTerm::constant(self.constant.clone());
        for (x, q) in &self.coeffs {
            out.add_coeff(map.get(x).cloned().unwrap_or_else(|| x.clone()), q);
        }
        out
    }

    pub fn collect_vars(&self, into: &mut BTreeSet<Var>) {
        into.extend(self.coeffs.keys().cloned());
    }
}

/// Terms as written, before normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    Var(Var),
    One,
    Const(RationalFunction),
    Add(Vec<RawTerm>),
    Sub(Box<RawTerm>, Box<RawTerm>),
    Neg(Box<RawTerm>),
    Lam(RationalFunction, Box<RawTerm>),
}

/// Collapse a raw term to `Q(t)`-linear normal form using additivity,
/// `λ_{pq} = λ_p ∘ λ_q` and `λ_1 = id`.
pub fn normalize_to_linear(t: &RawTerm) -> LinearTerm {
    match t {
        RawTerm::Var(x) => LinearTerm::var(x.clone()),
        RawTerm::One => LinearTerm::one(),
        RawTerm::Const(c) => LinearTerm::constant(c.clone()),
        RawTerm::Add(ts) => ts
            .iter()
            .fold(LinearTerm::zero(), |acc, t| acc.add(&normalize_to_linear(t))),
        RawTerm::Sub(a, b) => normalize_to_linear(a).sub(&normalize_to_linear(b)),
        RawTerm::Neg(a) => normalize_to_linear(a).neg(),
        RawTerm::Lam(q, a) => normalize_to_linear(a).scale(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    fn v(s: &str) -> Box<RawTerm> {
        Box::new(RawTerm::Var(Var::new(s)))
    }

    #[test]
    fn normalize_examples() {
        let t = RawTerm::Lam(rf("t"), Box::new(RawTerm::Add(vec![*v("x"), RawTerm::Lam(rf("1/t"), v("y"))])));
        let n = normalize_to_linear(&t);
        assert_eq!(n.coeff(&"x".into()), rf("t"));
        assert_eq!(n.coeff(&"y".into()), RationalFunction::one());
        assert!(n.constant_part().is_zero());

        let t = RawTerm::Lam(rf("2"), Box::new(RawTerm::Lam(rf("3"), Box::new(RawTerm::One))));
        assert_eq!(normalize_to_linear(&t), LinearTerm::constant(rf("6")));

        let t = RawTerm::Sub(v("x"), v("x"));
        assert!(normalize_to_linear(&t).is_zero());
    }

    #[test]
    fn substitute_scales_replacement() {
        let s = LinearTerm::scaled_var(rf("t"), "x").add(&LinearTerm::var("y"));
        let r = s.substitute(&"x".into(), &LinearTerm::scaled_var(rf("1/t"), "z"));
        assert_eq!(r, LinearTerm::var("y").add(&LinearTerm::var("z")));
    }
}
