//! Exact values: a standard part plus a lexicographic infinitesimal tail.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::qe::{completion_sign, Completion, Sign};
use crate::qfield::{Rational, RationalFunction};

/// `rational + Σ eps[i]·ε_i` with `ε_0 ≫ ε_1 ≫ …` positive infinitesimals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenericValue {
    pub rational: Rational,
    pub eps: BTreeMap<u64, Rational>,
}

impl GenericValue {
    pub fn rational(r: Rational) -> Self {
        GenericValue {
            rational: r,
            eps: BTreeMap::new(),
        }
    }

    /// `c + ε_index`.
    pub fn with_eps(c: Rational, index: u64) -> Self {
        let mut eps = BTreeMap::new();
        eps.insert(index, Rational::from_integer(1.into()));
        GenericValue { rational: c, eps }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.eps.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        GenericValue {
            rational: &self.rational + &other.rational,
            eps: merge(&self.eps, &other.eps, &Rational::from_integer(1.into())),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GenericValue::default();
        }
        GenericValue {
            rational: &self.rational * c,
            eps: self.eps.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Ord for GenericValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.rational.cmp(&other.rational) {
            Ordering::Equal => eps_sign(&self.sub(other).eps).cmp(&Sign::Zero),
            o => o,
        }
    }
}

impl PartialOrd for GenericValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn merge(a: &BTreeMap<u64, Rational>, b: &BTreeMap<u64, Rational>, scale_b: &Rational) -> BTreeMap<u64, Rational> {
    let mut out = a.clone();
    for (i, v) in b {
        let e = out.entry(*i).or_insert_with(Rational::zero);
        *e += v * scale_b;
        if e.is_zero() {
            out.remove(i);
        }
    }
    out
}

fn eps_sign(eps: &BTreeMap<u64, Rational>) -> Sign {
    eps.values().next().map_or(Sign::Zero, Sign::of)
}

fn write_eps(f: &mut fmt::Formatter<'_>, eps: &BTreeMap<u64, Rational>) -> fmt::Result {
    for (i, v) in eps {
        if v.is_negative() {
            write!(f, " - {}*e{i}", -v)?;
        } else {
            write!(f, " + {v}*e{i}")?;
        }
    }
    Ok(())
}

impl fmt::Display for GenericValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        write_eps(f, &self.eps)
    }
}

/// Value of an arbitrary element: the standard part carries the
/// `λ_q(1)`-component, ordered by the session's completion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Value {
    pub standard: RationalFunction,
    pub eps: BTreeMap<u64, Rational>,
}

impl From<&GenericValue> for Value {
    fn from(g: &GenericValue) -> Self {
        Value {
            standard: RationalFunction::from_rational(g.rational.clone()),
            eps: g.eps.clone(),
        }
    }
}

impl Value {
    pub fn constant(q: RationalFunction) -> Self {
        Value {
            standard: q,
            eps: BTreeMap::new(),
        }
    }

    pub fn rational(r: Rational) -> Self {
        Value::constant(RationalFunction::from_rational(r))
    }

    pub fn is_zero(&self) -> bool {
        self.standard.is_zero() && self.eps.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Value {
            standard: self.standard.add(&other.standard),
            eps: merge(&self.eps, &other.eps, &Rational::from_integer(1.into())),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Value::default();
        }
        Value {
            standard: self.standard.scale(c),
            eps: self.eps.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn sign(&self, c: &Completion) -> Sign {
        match completion_sign(c, &self.standard) {
            Sign::Zero => eps_sign(&self.eps),
            s => s,
        }
    }

    pub fn cmp_in(&self, other: &Self, c: &Completion) -> Ordering {
        self.sub(other).sign(c).cmp(&Sign::Zero)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.standard)?;
        write_eps(f, &self.eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;

    #[test]
    fn lexicographic_order() {
        let a = GenericValue::with_eps(rat(1, 2), 0);
        let b = GenericValue::rational(rat(1, 2));
        assert!(a > b);
        let c = GenericValue::with_eps(rat(1, 2), 1);
        assert!(a > c);
        assert!(a.sub(&c) > GenericValue::default());
        assert!(c.sub(&a).neg() > GenericValue::default());
        assert!(a.sub(&a).is_zero());
        assert!(GenericValue::rational(rat(1, 3)) > GenericValue::with_eps(rat(0, 1), 0));
    }

    #[test]
    fn standard_part_dominates() {
        let c = Completion::GermPosInf;
        let v = Value::constant(RationalFunction::t()).sub(&Value::from(&GenericValue::with_eps(rat(1000, 1), 2)));
        assert_eq!(v.sign(&c), Sign::Pos);
        assert_eq!(v.sign(&Completion::GermZeroPlus), Sign::Neg);
    }
}
