//! Exact feasibility of strict linear systems with rational coefficients
//! over the ordered value group. Shares no code with `qe`.

use num_traits::{Signed, Zero};

use super::value::Value;
use crate::logic::Rel;
use crate::qe::{Completion, Sign};
use crate::qfield::linalg::{nullspace, rank};
use crate::qfield::Rational;

/// `Σ coeffs[i]·z_i + constant ⋈ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinConstraint {
    pub coeffs: Vec<Rational>,
    pub constant: Value,
    pub rel: Rel,
}

impl LinConstraint {
    pub fn new(coeffs: Vec<Rational>, constant: Value, rel: Rel) -> Self {
        LinConstraint { coeffs, constant, rel }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

impl std::fmt::Display for Feasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Feasibility::Feasible => "FEASIBLE",
            Feasibility::Infeasible => "INFEASIBLE",
        })
    }
}

/// Extreme rays of `{ y ≥ 0 : yᵀA = 0 }`, as minimal-support vectors.
///
/// A support `S` gives a ray when `A_Sᵀ` has a one-dimensional kernel
/// spanned by a vector with no zero entries and a single sign. Supports
/// larger than `rank(A) + 1` never qualify.
pub fn extreme_rays(a: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let m = a.len();
    let r = rank(a);
    let mut out = Vec::new();
    let mut subset = Vec::new();
    for size in 1..=(r + 1).min(m) {
        subsets(m, size, 0, &mut subset, &mut |s| {
            // rows of the transposed system: one per column of A
            let t: Vec<Vec<Rational>> = (0..width).map(|j| s.iter().map(|&i| a[i][j].clone()).collect()).collect();
            let ns = nullspace(&t, s.len());
            if ns.len() != 1 {
                return;
            }
            let v = &ns[0];
            let positive = v.iter().all(|c| c.is_positive());
            let negative = v.iter().all(|c| c.is_negative());
            if !(positive || negative) {
                return;
            }
            let mut y = vec![Rational::zero(); m];
            for (k, &i) in s.iter().enumerate() {
                y[i] = if positive { v[k].clone() } else { -v[k].clone() };
            }
            out.push(y);
        });
    }
    out
}

fn subsets(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == size {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < size - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, size, i + 1, cur, f);
        cur.pop();
    }
}

/// Exact feasibility over the value group for the session's completion.
///
/// Equalities are solved by substitution, one-variable systems by interval
/// shrinking, larger ones by the Motzkin alternative over extreme rays.
/// `≠` constraints with a nonzero coefficient only remove a hyperplane from
/// an open set and are dropped once the strict part is feasible.
pub fn numeric_feasible(nvars: usize, constraints: &[LinConstraint], c: &Completion) -> Feasibility {
    let mut cons: Vec<LinConstraint> = constraints.to_vec();
    // equalities
    while let Some(pos) = cons
        .iter()
        .position(|k| k.rel == Rel::Eq && k.coeffs.iter().any(|a| !a.is_zero()))
    {
        let eq = cons.remove(pos);
        let j = eq.coeffs.iter().position(|a| !a.is_zero()).unwrap();
        let inv = -eq.coeffs[j].recip();
        // z_j = inv·(Σ_{i≠j} a_i z_i + b)
        cons = cons
            .into_iter()
            .map(|k| {
                let f = &k.coeffs[j];
                if f.is_zero() {
                    return k;
                }
                let m = f * &inv;
                let coeffs = k
                    .coeffs
                    .iter()
                    .zip(&eq.coeffs)
                    .enumerate()
                    .map(|(i, (a, e))| if i == j { Rational::zero() } else { a + &m * e })
                    .collect();
                LinConstraint::new(coeffs, k.constant.add(&eq.constant.scale(&m)), k.rel)
            })
            .collect();
    }
    let mut strict = Vec::new();
    for k in &cons {
        let constant_only = k.coeffs.iter().all(Zero::is_zero);
        match (k.rel, constant_only) {
            (Rel::Eq, _) => {
                if !k.constant.is_zero() {
                    return Feasibility::Infeasible;
                }
            }
            (Rel::Ne, true) => {
                if k.constant.is_zero() {
                    return Feasibility::Infeasible;
                }
            }
            (Rel::Ne, false) => {}
            (Rel::Lt, true) => {
                if k.constant.sign(c) != Sign::Neg {
                    return Feasibility::Infeasible;
                }
            }
            (Rel::Lt, false) => strict.push(k),
        }
    }
    let active: Vec<usize> = (0..nvars).filter(|&i| strict.iter().any(|k| !k.coeffs[i].is_zero())).collect();
    let ok = match active.len() {
        0 => true,
        1 => interval_feasible(active[0], &strict, c),
        _ => {
            let a: Vec<Vec<Rational>> = strict.iter().map(|k| active.iter().map(|&i| k.coeffs[i].clone()).collect()).collect();
            extreme_rays(&a, active.len()).iter().all(|y| {
                let s = y
                    .iter()
                    .zip(&strict)
                    .fold(Value::default(), |acc, (yi, k)| acc.add(&k.constant.scale(yi)));
                s.sign(c) == Sign::Neg
            })
        }
    };
    if ok {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible
    }
}

/// `a·z + b < 0` for a single variable: z < -b/a or z > -b/a.
fn interval_feasible(i: usize, strict: &[&LinConstraint], c: &Completion) -> bool {
    let mut lo: Option<Value> = None;
    let mut hi: Option<Value> = None;
    for k in strict {
        let a = &k.coeffs[i];
        let bound = k.constant.scale(&(-a.recip()));
        if a.is_positive() {
            if hi.as_ref().map_or(true, |h| bound.cmp_in(h, c).is_lt()) {
                hi = Some(bound);
            }
        } else if lo.as_ref().map_or(true, |l| bound.cmp_in(l, c).is_gt()) {
            lo = Some(bound);
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l.cmp_in(&h, c).is_lt(),
        _ => true,
    }
}
