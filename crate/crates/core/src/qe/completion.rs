//! Computable completions: total Q-linear orderings of `Q(t)` used as the
//! type of the constant `1`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qfield::{Polynomial, Rational, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(c: &Rational) -> Sign {
        match Polynomial::sign_of(c) {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }

    fn flip_if(self, cond: bool) -> Sign {
        match (self, cond) {
            (Sign::Pos, true) => Sign::Neg,
            (Sign::Neg, true) => Sign::Pos,
            (s, _) => s,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Neg => "NEG",
            Sign::Zero => "ZERO",
            Sign::Pos => "POS",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Completion {
    /// `t` larger than every rational.
    #[default]
    GermPosInf,
    /// `t` positive and smaller than every positive rational.
    GermZeroPlus,
    /// A seeded lexicographic ordering; see [`SeededParams`].
    SeededGeneric(u64),
}

impl fmt::Display for Completion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Completion::GermPosInf => f.write_str("germ-pos-inf"),
            Completion::GermZeroPlus => f.write_str("germ-zero"),
            Completion::SeededGeneric(s) => write!(f, "seeded:{s}"),
        }
    }
}

impl FromStr for Completion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "germ-pos-inf" => Ok(Completion::GermPosInf),
            "germ-zero" | "germ-zero-plus" => Ok(Completion::GermZeroPlus),
            _ => s
                .strip_prefix("seeded:")
                .and_then(|n| n.parse().ok())
                .map(Completion::SeededGeneric)
                .ok_or_else(|| Error::parse(1, 1, format!("unknown completion `{s}`"))),
        }
    }
}

/// Parameters of a seeded completion.
///
/// `q` is expanded as a Laurent series in `u = t - point`; the sign is that
/// of `w_neg * c_{-1} + c_0 + w_pos * c_1`, falling back to the germ sign at
/// `point` from the chosen side when that functional vanishes. The
/// functional is Q-linear and the germ is an ordering, so the result is a
/// Q-linear ordering with sign zero only at `q = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeededParams {
    pub point: Rational,
    pub from_left: bool,
    pub w_neg: Rational,
    pub w_pos: Rational,
}

impl SeededParams {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = |lo: i64, hi: i64, d: i64| -> Rational {
            Rational::new(rng.gen_range(lo..=hi).into(), rng.gen_range(1..=d).into())
        };
        let point = r(-12, 12, 6);
        let w_neg = r(-9, 9, 4);
        let w_pos = r(-9, 9, 4);
        let from_left = rng.gen_bool(0.5);
        SeededParams {
            point,
            from_left,
            w_neg,
            w_pos,
        }
    }
}

/// Laurent expansion of `q` at `a`: `q = u^order * Σ_j series[j] u^j`,
/// `series[0] ≠ 0`, with `len` terms.
pub fn laurent_at(q: &RationalFunction, a: &Rational, len: usize) -> (i64, Vec<Rational>) {
    let n = q.num().shift(a);
    let d = q.den().shift(a);
    let (mn, _) = n.lowest().expect("nonzero numerator");
    let (md, _) = d.lowest().expect("nonzero denominator");
    let nc = &n.coeffs()[mn..];
    let dc = &d.coeffs()[md..];
    let mut e: Vec<Rational> = Vec::with_capacity(len);
    for j in 0..len {
        let mut acc = nc.get(j).cloned().unwrap_or_else(Rational::zero);
        for i in 1..=j.min(dc.len() - 1) {
            acc -= &dc[i] * &e[j - i];
        }
        e.push(acc / &dc[0]);
    }
    (mn as i64 - md as i64, e)
}

pub fn completion_sign(c: &Completion, q: &RationalFunction) -> Sign {
    if q.is_zero() {
        return Sign::Zero;
    }
    match c {
        Completion::GermPosInf => Sign::of(&q.leading_ratio()),
        Completion::GermZeroPlus => {
            let (_, a) = q.num().lowest().expect("nonzero");
            let (_, b) = q.den().lowest().expect("nonzero");
            Sign::of(&(a * b))
        }
        Completion::SeededGeneric(seed) => seeded_sign(&SeededParams::from_seed(*seed), q),
    }
}

pub fn seeded_sign(p: &SeededParams, q: &RationalFunction) -> Sign {
    if q.is_zero() {
        return Sign::Zero;
    }
    let (order, e) = laurent_at(q, &p.point, 3);
    let coeff = |k: i64| -> Rational {
        let j = k - order;
        if (0..3).contains(&j) {
            e[j as usize].clone()
        } else {
            Rational::zero()
        }
    };
    let r = &p.w_neg * coeff(-1) + coeff(0) + &p.w_pos * coeff(1);
    if !r.is_zero() {
        return Sign::of(&r);
    }
    let odd = order.rem_euclid(2) == 1;
    Sign::of(&e[0]).flip_if(p.from_left && odd)
}

/// `a < b` under the completion, for constants `λ_a(1)`, `λ_b(1)`.
pub fn completion_less(c: &Completion, a: &RationalFunction, b: &RationalFunction) -> bool {
    completion_sign(c, &b.sub(a)) == Sign::Pos
}
