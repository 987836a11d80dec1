use std::collections::BTreeMap;

use densevec::logic::{
    canonical, normalize_to_linear, parse_formula, print_canonical, to_nnf_dnf, Atom, Formula, LinearTerm, Mode, RawTerm, Rel, Var,
};
use densevec::model::{numeric_feasible, Feasibility, LinConstraint, ModelElement, ModelSession, Value};
use densevec::qe::{decide, elim_quantifiers, Completion};
use densevec::qfield::{linsolve_q, q_basis, rf_coordinates, Rational, RationalFunction};
use densevec::sample::{random_formula, random_qf_formula, random_rf, random_sentence, SampleConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COMPLETIONS: [Completion; 3] = [Completion::GermPosInf, Completion::GermZeroPlus, Completion::SeededGeneric(5)];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rat(r: &mut impl Rng) -> Rational {
    Rational::new(r.gen_range(-9..=9).into(), r.gen_range(1..=4).into())
}

fn rank_q(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut rank = 0;
    let cols = m.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != Rational::from_integer(0.into())) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != Rational::from_integer(0.into()) {
                let f = &m[i][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let [a, b, c] = [0; 3].map(|_| random_rf(&mut r, 3, 9));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&a.inv().unwrap()), RationalFunction::one());
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn canonical_forms_are_unique(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_rf(&mut r, 3, 9);
        let c = random_rf(&mut r, 2, 9);
        let same = RationalFunction::canonicalize(a.num().mul(c.num()), a.den().mul(c.num())).unwrap();
        prop_assert_eq!(&same, &a);
        prop_assert_eq!(same.to_string(), a.to_string());
        prop_assert_eq!(RationalFunction::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn normalization_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = [Var::new("x"), Var::new("y")];
        let raw = |r: &mut ChaCha8Rng| -> RawTerm {
            let mut t = RawTerm::Var(vars[r.gen_range(0..2)].clone());
            for _ in 0..r.gen_range(0..3) {
                t = match r.gen_range(0..3) {
                    0 => RawTerm::Lam(random_rf(r, 2, 9), Box::new(t)),
                    1 => RawTerm::Add(vec![t, RawTerm::Var(vars[r.gen_range(0..2)].clone())]),
                    _ => RawTerm::Sub(Box::new(t), Box::new(RawTerm::Const(random_rf(r, 2, 9)))),
                };
            }
            t
        };
        let t1 = raw(&mut r);
        let t2 = raw(&mut r);
        let q = random_rf(&mut r, 2, 9);
        let (n1, n2) = (normalize_to_linear(&t1), normalize_to_linear(&t2));
        prop_assert_eq!(normalize_to_linear(&RawTerm::Add(vec![t1.clone(), t2])), n1.add(&n2));
        prop_assert_eq!(normalize_to_linear(&RawTerm::Lam(q.clone(), Box::new(t1))), n1.scale(&q));
    }

    #[test]
    fn q_basis_reconstructs_inputs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let mut qs: Vec<RationalFunction> = (0..n).map(|_| random_rf(&mut r, 2, 5)).collect();
        if r.gen_bool(0.5) {
            let mix = qs[0].scale(&small_rat(&mut r)).add(&qs[n - 1]);
            if !mix.is_zero() {
                qs.push(mix);
            }
        }
        let dec = q_basis(&qs);
        for (i, q) in qs.iter().enumerate() {
            prop_assert_eq!(&dec.reconstruct(i), q);
        }
        let (_, coords) = rf_coordinates(&dec.basis);
        prop_assert_eq!(rank_q(&coords), dec.rank());
    }

    #[test]
    fn linsolve_solutions_check_out(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (m, n) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let a: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| small_rat(&mut r)).collect()).collect();
        let target: Vec<Rational> = (0..m).map(|_| small_rat(&mut r)).collect();
        let mut aug = a.clone();
        for (row, t) in aug.iter_mut().zip(&target) {
            row.push(t.clone());
        }
        match linsolve_q(&a, &target).unwrap() {
            Some(z) => {
                for (row, t) in a.iter().zip(&target) {
                    let lhs: Rational = row.iter().zip(&z).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(&lhs, t);
                }
            }
            None => prop_assert!(rank_q(&aug) > rank_q(&a)),
        }
    }
}

#[test]
fn print_parse_round_trip() {
    let cfg = SampleConfig::default();
    let mut r = rng(11);
    let vars = [Var::new("a"), Var::new("b")];
    for _ in 0..500 {
        let f = random_formula(&mut r, &vars, &cfg);
        let text = print_canonical(&f);
        assert_eq!(parse_formula(&text).unwrap(), f, "{text}");
    }
}

#[test]
fn nnf_and_dnf_preserve_truth() {
    let cfg = SampleConfig::default();
    let mut r = rng(12);
    let vars = [Var::new("a"), Var::new("b"), Var::new("c")];
    for i in 0..200 {
        let f = random_qf_formula(&mut r, &vars, &cfg);
        let n = to_nnf_dnf(&f, Mode::Nnf).unwrap();
        let d = to_nnf_dnf(&f, Mode::Dnf).unwrap();
        let mut s = ModelSession::new(COMPLETIONS[i % 3], i as u64);
        for _ in 0..20 {
            let env: BTreeMap<Var, ModelElement> = vars.iter().map(|v| (v.clone(), s.sample_element(&mut r))).collect();
            let want = s.eval_formula(&f, &env).unwrap();
            assert_eq!(s.eval_formula(&n, &env).unwrap(), want, "nnf of {f}");
            assert_eq!(s.eval_formula(&d, &env).unwrap(), want, "dnf of {f}");
        }
    }
}

#[test]
fn qe_is_idempotent() {
    let cfg = SampleConfig::default();
    let mut r = rng(13);
    let vars = [Var::new("a"), Var::new("b")];
    for _ in 0..200 {
        let f = random_formula(&mut r, &vars, &cfg);
        let once = elim_quantifiers(&f).unwrap().formula;
        assert_eq!(elim_quantifiers(&once).unwrap().formula, once, "{f}");
        let g = random_qf_formula(&mut r, &vars, &cfg);
        assert_eq!(elim_quantifiers(&g).unwrap().formula, canonical(&g));
    }
}

#[test]
fn decisions_are_coherent() {
    let cfg = SampleConfig::default();
    let mut r = rng(14);
    for _ in 0..200 {
        let f = random_sentence(&mut r, &cfg);
        let q = elim_quantifiers(&f).unwrap().formula;
        for c in &COMPLETIONS {
            let d = decide(&f, c).unwrap();
            assert_ne!(d, decide(&Formula::not(f.clone()), c).unwrap(), "{f} under {c}");
            assert_eq!(d, decide(&q, c).unwrap(), "{f} under {c}");
        }
    }
}

#[test]
fn numeric_feasible_matches_decide() {
    let mut r = rng(15);
    for i in 0..300 {
        let k = r.gen_range(1..=3);
        let ys: Vec<Var> = (0..k).map(|j| Var::new(format!("y{j}"))).collect();
        let mut cons = Vec::new();
        let mut lits = Vec::new();
        for _ in 0..r.gen_range(1..=4) {
            let coeffs: Vec<Rational> = (0..k).map(|_| small_rat(&mut r)).collect();
            let q = if r.gen_bool(0.5) { random_rf(&mut r, 2, 5) } else { RationalFunction::from_rational(small_rat(&mut r)) };
            let rel = match r.gen_range(0..5) {
                0 => Rel::Eq,
                1 => Rel::Ne,
                _ => Rel::Lt,
            };
            let lhs = LinearTerm::from_parts(
                ys.iter().cloned().zip(coeffs.iter().map(|c| RationalFunction::from_rational(c.clone()))),
                q.clone(),
            );
            lits.push(Formula::Atom(Atom::new(lhs, rel)));
            cons.push(LinConstraint::new(coeffs, Value::constant(q), rel));
        }
        let c = COMPLETIONS[i % 3];
        let f = Formula::exists(ys, Formula::And(lits));
        let want = decide(&f, &c).unwrap();
        assert_eq!(numeric_feasible(k, &cons, &c) == Feasibility::Feasible, want, "{f} under {c}");
    }
}

#[test]
fn fresh_directions_get_distinct_infinitesimals() {
    let mut r = rng(16);
    let mut s = ModelSession::new(Completion::GermPosInf, 16);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..50 {
        let e = s.sample_element(&mut r);
        let _ = s.element_value(&e).unwrap();
    }
    for g in &s.generators {
        for (_, v) in &g.assignment {
            for idx in v.eps.keys() {
                assert!(seen.insert(*idx), "eps index {idx} reused");
            }
        }
    }
}
