//! Seeded random generators for property tests and benchmarks.

use rand::Rng;

use crate::logic::{Atom, Formula, LinearTerm, Var};
use crate::qfield::{Polynomial, Rational, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_quantifiers: usize,
    pub max_atoms: usize,
    pub max_degree: usize,
    pub coeff_bound: i64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_quantifiers: 3,
            max_atoms: 8,
            max_degree: 2,
            coeff_bound: 9,
        }
    }
}

pub fn random_poly(rng: &mut impl Rng, max_degree: usize, bound: i64) -> Polynomial {
    let d = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=d).map(|_| Rational::from_integer(rng.gen_range(-bound..=bound).into())).collect())
}

/// A nonzero rational function; the denominator is 1 about half the time.
pub fn random_rf(rng: &mut impl Rng, max_degree: usize, bound: i64) -> RationalFunction {
    loop {
        let num = random_poly(rng, max_degree, bound);
        if num.is_zero() {
            continue;
        }
        let den = if rng.gen_bool(0.5) {
            Polynomial::one()
        } else {
            random_poly(rng, max_degree, bound)
        };
        if den.is_zero() {
            continue;
        }
        return RationalFunction::canonicalize(num, den).expect("nonzero denominator");
    }
}

/// A nonconstant rational function.
pub fn random_nonconstant_rf(rng: &mut impl Rng, max_degree: usize, bound: i64) -> RationalFunction {
    loop {
        let q = random_rf(rng, max_degree.max(1), bound);
        if !q.is_constant() {
            return q;
        }
    }
}

/// Mostly small integers and `t`, occasionally a general function.
fn coefficient(rng: &mut impl Rng, cfg: &SampleConfig) -> RationalFunction {
    match rng.gen_range(0..10) {
        0..=3 => RationalFunction::from_i64(rng.gen_range(1..=3) * if rng.gen_bool(0.3) { -1 } else { 1 }),
        4..=6 => RationalFunction::t().scale(&Rational::from_integer(rng.gen_range(1..=2).into())),
        _ => random_rf(rng, cfg.max_degree, cfg.coeff_bound),
    }
}

pub fn random_term(rng: &mut impl Rng, vars: &[Var], cfg: &SampleConfig) -> LinearTerm {
    let mut t = LinearTerm::zero();
    if !vars.is_empty() {
        let n = rng.gen_range(1..=vars.len().min(3));
        for _ in 0..n {
            let x = &vars[rng.gen_range(0..vars.len())];
            t = t.add(&LinearTerm::scaled_var(coefficient(rng, cfg), x.clone()));
        }
    }
    if vars.is_empty() || rng.gen_bool(0.4) {
        t = t.add(&LinearTerm::constant(coefficient(rng, cfg)));
    }
    t
}

pub fn random_atom(rng: &mut impl Rng, vars: &[Var], cfg: &SampleConfig) -> Atom {
    let lhs = random_term(rng, vars, cfg);
    match rng.gen_range(0..10) {
        0..=5 => Atom::lt(lhs),
        6..=7 => Atom::eq(lhs),
        _ => Atom::ne(lhs),
    }
}

pub fn random_qf_formula(rng: &mut impl Rng, vars: &[Var], cfg: &SampleConfig) -> Formula {
    let n = rng.gen_range(1..=cfg.max_atoms.max(1));
    qf_tree(rng, vars, n, cfg)
}

fn qf_tree(rng: &mut impl Rng, vars: &[Var], atoms: usize, cfg: &SampleConfig) -> Formula {
    if atoms <= 1 {
        let a: Formula = random_atom(rng, vars, cfg).into();
        return if rng.gen_bool(0.15) { Formula::not(a) } else { a };
    }
    let left = rng.gen_range(1..atoms);
    let l = qf_tree(rng, vars, left, cfg);
    let r = qf_tree(rng, vars, atoms - left, cfg);
    match rng.gen_range(0..10) {
        0..=3 => Formula::And(vec![l, r]),
        4..=7 => Formula::Or(vec![l, r]),
        8 => Formula::implies(l, r),
        _ => Formula::not(Formula::And(vec![l, r])),
    }
}

/// A random formula with at most `cfg.max_quantifiers` bound variables
/// over the free variables `free`.
pub fn random_formula(rng: &mut impl Rng, free: &[Var], cfg: &SampleConfig) -> Formula {
    let nq = rng.gen_range(0..=cfg.max_quantifiers);
    let atoms = rng.gen_range(1..=cfg.max_atoms.max(1)).max(nq.min(cfg.max_atoms));
    let mut scope = free.to_vec();
    let mut counter = 0;
    gen(rng, &mut scope, atoms, nq, &mut counter, cfg)
}

/// A random closed formula.
pub fn random_sentence(rng: &mut impl Rng, cfg: &SampleConfig) -> Formula {
    random_formula(rng, &[], cfg)
}

fn gen(
    rng: &mut impl Rng,
    scope: &mut Vec<Var>,
    atoms: usize,
    quants: usize,
    counter: &mut usize,
    cfg: &SampleConfig,
) -> Formula {
    if quants > 0 && (atoms <= 1 || rng.gen_bool(0.5)) {
        let x = Var::new(format!("x{}", *counter));
        *counter += 1;
        scope.push(x.clone());
        let body = gen(rng, scope, atoms, quants - 1, counter, cfg);
        scope.pop();
        return match rng.gen_range(0..10) {
            0..=4 => Formula::exists(vec![x], body),
            5..=8 => Formula::forall(vec![x], body),
            _ => Formula::exists_inf(x, body),
        };
    }
    if atoms <= 1 {
        return random_atom(rng, scope, cfg).into();
    }
    let left = rng.gen_range(1..atoms);
    let ql = if quants > 0 { rng.gen_range(0..=quants) } else { 0 };
    let l = gen(rng, scope, left, ql, counter, cfg);
    let r = gen(rng, scope, atoms - left, quants - ql, counter, cfg);
    match rng.gen_range(0..10) {
        0..=3 => Formula::And(vec![l, r]),
        4..=7 => Formula::Or(vec![l, r]),
        8 => Formula::implies(l, r),
        _ => Formula::not(Formula::Or(vec![l, r])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn bounds_respected() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let cfg = SampleConfig::default();
        for _ in 0..200 {
            let f = random_sentence(&mut rng, &cfg);
            assert!(f.quantifier_count() <= 3);
            assert!(f.atom_count() <= 8);
            assert!(f.free_vars().is_empty());
        }
    }
}
