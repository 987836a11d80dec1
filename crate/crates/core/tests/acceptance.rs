//! Acceptance suite. Each criterion prints one PASS/FAIL line; the binary
//! exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use densevec::logic::{parse_formula, Atom, Formula, LinearTerm, Var};
use densevec::model::{
    eval_formula, eval_prepared, exchange_check, nonstrong_demo, prepare, ExchangeOutcome, ModelElement, ModelSession, Value,
};
use densevec::qe::{closure_in, decide, elim_quantifiers, interior_in, Completion};
use densevec::qfield::{q_independent, Rational, RationalFunction};
use densevec::sample::{random_formula, random_nonconstant_rf, random_qf_formula, random_rf, random_sentence, random_term, SampleConfig};
use densevec::skolem::{
    axiom_instance, check_finite_model, eligibility_code, eval_chain, eval_sk, split_term_chain, ChainArg, ChainStep, SkFormula,
    SkolemSignature, SkolemTable, TermChain, Theta, UniformConfiguration,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

type Outcome = Result<String, String>;

const COMPLETIONS: [Completion; 3] = [Completion::GermPosInf, Completion::GermZeroPlus, Completion::SeededGeneric(11)];

/// Every decision made by the suite, checked against `¬φ` and `qe(φ)`.
#[derive(Default)]
struct Coherence {
    checks: usize,
    failures: Vec<String>,
}

impl Coherence {
    fn decide(&mut self, f: &Formula, c: &Completion) -> bool {
        let d = decide(f, c).unwrap();
        let n = decide(&Formula::not(f.clone()), c).unwrap();
        let q = elim_quantifiers(f).unwrap().formula;
        let dq = decide(&q, c).unwrap();
        self.checks += 1;
        if d && n {
            self.failures.push(format!("both φ and ¬φ TRUE: {f} under {c}"));
        }
        if d != dq {
            self.failures.push(format!("decide(φ) ≠ decide(qe φ): {f} under {c}"));
        }
        d
    }
}

fn x() -> Var {
    Var::new("x")
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn lam(q: RationalFunction, v: &Var) -> LinearTerm {
    LinearTerm::scaled_var(q, v.clone())
}

fn inside(s: &mut ModelSession, v: &Value, lo: &Rational, hi: &Rational) -> bool {
    let c = s.completion;
    Value::rational(lo.clone()).cmp_in(v, &c) == Ordering::Less && v.cmp_in(&Value::rational(hi.clone()), &c) == Ordering::Less
}

/// `n` pairwise disjoint open intervals with rational endpoints, shuffled.
fn disjoint_boxes(rng: &mut impl Rng, n: usize) -> Vec<(Rational, Rational)> {
    let mut ends = BTreeSet::new();
    while ends.len() < 2 * n {
        ends.insert(rat(rng.gen_range(-40..=40), rng.gen_range(1..=4)));
    }
    let ends: Vec<Rational> = ends.into_iter().collect();
    let mut boxes: Vec<(Rational, Rational)> = ends.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    boxes.shuffle(rng);
    boxes
}

fn c1_qe_oracle(coh: &mut Coherence) -> Outcome {
    let cfg = SampleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut agree = 0;
    for i in 0..500 {
        let c = COMPLETIONS[i % 3];
        let f = random_sentence(&mut rng, &cfg);
        let d = coh.decide(&f, &c);
        let mut s = ModelSession::new(c, i as u64);
        let o = eval_formula(&mut s, &f, &BTreeMap::new()).unwrap();
        if d != o {
            return Err(format!("sentence {i} under {c}: decide {d}, oracle {o}: {f}"));
        }
        agree += 1;
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("{agree}/500 agree, {t:.1?}"))
}

fn c2_open_formulas() -> Outcome {
    let cfg = SampleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let vars = [Var::new("a"), Var::new("b")];
    let mut points = 0;
    for i in 0..300 {
        let free = &vars[..rng.gen_range(1..=2)];
        let f = random_formula(&mut rng, free, &cfg);
        let q = elim_quantifiers(&f).unwrap().formula;
        let pf = prepare(&f).unwrap();
        let mut s = ModelSession::new(COMPLETIONS[i % 3], i as u64);
        for _ in 0..50 {
            let env: BTreeMap<Var, ModelElement> = vars.iter().map(|v| (v.clone(), s.sample_element(&mut rng))).collect();
            if eval_prepared(&mut s, &pf, &env).unwrap() != s.eval_formula(&q, &env).unwrap() {
                return Err(format!("formula {i} disagrees: {f}\nqe: {q}"));
            }
            points += 1;
        }
    }
    Ok(format!("300 formulas, {points} points agree"))
}

fn c3_vector_space_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut s = ModelSession::new(Completion::GermPosInf, 3);
    for i in 0..1000 {
        let q1 = random_rf(&mut rng, 3, 9);
        let q2 = random_rf(&mut rng, 3, 9);
        let e = s.sample_element(&mut rng);
        let f = s.sample_element(&mut rng);
        let laws = [
            e.scale(&q1.mul(&q2)) == e.scale(&q2).scale(&q1),
            e.scale(&q1.add(&q2)) == e.scale(&q1).add(&e.scale(&q2)),
            e.add(&f).scale(&q1) == e.scale(&q1).add(&f.scale(&q1)),
            e.scale(&RationalFunction::one()) == e,
        ];
        if let Some(k) = laws.iter().position(|ok| !ok) {
            return Err(format!("triple {i}: law {k} fails for q1 = {q1}, q2 = {q2}, e = {e}"));
        }
    }
    Ok("1000 triples".into())
}

fn c4_density() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    for i in 0..200 {
        let m = rng.gen_range(1..=4);
        let qs = loop {
            let qs: Vec<RationalFunction> = (0..m).map(|_| random_rf(&mut rng, 3, 9)).collect();
            if q_independent(&qs) {
                break qs;
            }
        };
        let boxes = disjoint_boxes(&mut rng, m);
        let mut s = ModelSession::new(COMPLETIONS[i % 3], i as u64);
        let g = s.witness_in_boxes(&qs, &boxes).map_err(|e| format!("instance {i}: {e}"))?;
        for (q, (lo, hi)) in qs.iter().zip(&boxes) {
            let v = s.element_value(&g.scale(q)).unwrap();
            if !inside(&mut s, &v, lo, hi) {
                return Err(format!("instance {i}: λ_{q}(g) = {v} outside ({lo}, {hi})"));
            }
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(30) {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("200 witnesses verified, {t:.1?}"))
}

fn c5_torsion(coh: &mut Coherence) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let q = random_nonconstant_rf(&mut rng, 3, 9);
        let c = rat(rng.gen_range(-20..=20), rng.gen_range(1..=5));
        let f = Formula::Atom(Atom::eq(LinearTerm::constant(q.sub(&RationalFunction::from_rational(c.clone())))));
        if coh.decide(&f, &COMPLETIONS[i % 3]) {
            return Err(format!("λ_{q}(one) = λ_{c}(one) decided TRUE"));
        }
    }
    Ok("100 instances FALSE".into())
}

fn random_combo(rng: &mut impl Rng, gens: &[ModelElement]) -> ModelElement {
    let mut e = ModelElement::zero();
    for g in gens {
        if rng.gen_bool(0.5) {
            e = e.add(&g.scale(&random_rf(rng, 2, 5)));
        }
    }
    e
}

fn c6_exchange() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut holds = 0;
    for i in 0..200 {
        let mut s = ModelSession::new(Completion::GermPosInf, i);
        let k = rng.gen_range(1..=5);
        let gens: Vec<ModelElement> =
            (0..k).map(|_| s.witness_in_boxes(&[RationalFunction::one()], &[(rat(0, 1), rat(1, 1))]).unwrap()).collect();
        let set: Vec<ModelElement> = (0..rng.gen_range(0..=3)).map(|_| random_combo(&mut rng, &gens)).collect();
        let b = random_combo(&mut rng, &gens);
        let mut a = random_combo(&mut rng, &set);
        if rng.gen_bool(0.8) {
            a = a.add(&b.scale(&random_rf(&mut rng, 2, 5)));
        }
        match exchange_check(&set, &a, &b) {
            ExchangeOutcome::Violation => return Err(format!("instance {i}: a = {a}, b = {b}")),
            ExchangeOutcome::Holds => holds += 1,
            ExchangeOutcome::Vacuous => {}
        }
    }
    Ok(format!("0 violations ({holds} non-vacuous)"))
}

fn c7_nonstrong() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<RationalFunction> = (0..10u32)
        .map(|j| {
            let c = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { -1 } else { 1 };
            RationalFunction::t().pow(j).scale(&rat(c, 1)).add(&RationalFunction::from_i64(rng.gen_range(-9..=9) * i64::from(j > 0)))
        })
        .collect();
    let cols = disjoint_boxes(&mut rng, 10);
    let mut s = ModelSession::new(Completion::GermPosInf, 7);
    for p in 0..20 {
        let path: Vec<usize> = (0..10).map(|_| rng.gen_range(0..10)).collect();
        let r = nonstrong_demo(&mut s, &rows, &cols, &path).map_err(|e| format!("path {p}: {e}"))?;
        for (j, &col) in path.iter().enumerate() {
            let v = s.element_value(&r.witness.scale(&rows[j])).unwrap();
            if v != r.values[j] || !inside(&mut s, &v, &cols[col].0, &cols[col].1) {
                return Err(format!("path {p}, row {j}: value {v} not in column {col}"));
            }
        }
        if r.pair_checks.len() != 10 * 45 || !r.rows_pairwise_inconsistent() {
            return Err(format!("path {p}: a same-row pair is not INFEASIBLE"));
        }
    }
    Ok("20 paths verified, all same-row pairs INFEASIBLE".into())
}

fn c8_open_core(coh: &mut Coherence) -> Outcome {
    let c = Completion::GermPosInf;
    let vx = [x()];
    let pos = Formula::Atom(Atom::lt(lam(RationalFunction::t(), &x()).neg()));
    if coh.decide(&Formula::exists(vx.to_vec(), interior_in(&pos, &vx, &c).unwrap()), &c) {
        return Err("INTERIOR(λ_t(x) > 0) is not empty".into());
    }
    if !coh.decide(&Formula::forall(vx.to_vec(), closure_in(&pos, &vx, &c).unwrap()), &c) {
        return Err("CLOSURE(λ_t(x) > 0) is not full".into());
    }
    let cfg = SampleConfig {
        max_atoms: 4,
        ..SampleConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let f = random_qf_formula(&mut rng, &vx, &cfg);
        let comp = COMPLETIONS[i % 3];
        let int = interior_in(&f, &vx, &comp).unwrap();
        let int2 = interior_in(&int, &vx, &comp).unwrap();
        if !coh.decide(&Formula::forall(vx.to_vec(), Formula::iff(int2, int.clone())), &comp) {
            return Err(format!("interior not idempotent for {f}"));
        }
        if !coh.decide(&Formula::forall(vx.to_vec(), Formula::implies(int, f.clone())), &comp) {
            return Err(format!("INTERIOR(f) → f fails for {f}"));
        }
    }
    Ok("smoke tests + 100 unary formulas".into())
}

fn c9_coherence(coh: &Coherence) -> Outcome {
    let f = parse_formula("(> (lam (- t 100) one) (const 0))").unwrap();
    let hi = decide(&f, &Completion::GermPosInf).unwrap();
    let lo = decide(&f, &Completion::GermZeroPlus).unwrap();
    if !hi || lo {
        return Err(format!("λ_(t-100)(one) > 0: germ-pos-inf {hi}, germ-zero {lo}"));
    }
    if let Some(first) = coh.failures.first() {
        return Err(format!("{} incoherent decisions, first: {first}", coh.failures.len()));
    }
    Ok(format!("{} decisions coherent, germ completions disagree on λ_(t-100)(one) > 0", coh.checks))
}

fn random_signature(rng: &mut impl Rng) -> SkolemSignature {
    let cfg = SampleConfig {
        max_atoms: 3,
        ..SampleConfig::default()
    };
    let mut sig = SkolemSignature::base();
    for i in 0..3 {
        let xs: Vec<Var> = (0..rng.gen_range(1..=2)).map(|k| Var::new(format!("u{k}"))).collect();
        let y = Var::new("w");
        let mut all = xs.clone();
        all.push(y.clone());
        let body = random_qf_formula(rng, &all, &cfg);
        sig.declare(&format!("F{i}"), Theta::new(xs, y, body).unwrap()).unwrap();
    }
    sig
}

fn random_chain(rng: &mut impl Rng, sig: &SkolemSignature) -> TermChain {
    let cfg = SampleConfig::default();
    let xs: Vec<Var> = (0..rng.gen_range(1..=2)).map(|k| Var::new(format!("x{k}"))).collect();
    let n = rng.gen_range(1..=4);
    let names = TermChain::new(xs.clone(), vec![ChainStep::Base(LinearTerm::zero()); n]).ys;
    let mut steps = Vec::new();
    for i in 0..n {
        let avail: Vec<ChainArg> = (0..xs.len()).map(ChainArg::X).chain((0..i).map(ChainArg::Y)).collect();
        if rng.gen_bool(0.6) {
            let f = sig.fns.choose(rng).unwrap();
            let args = (0..f.arity()).map(|_| avail.choose(rng).unwrap().clone()).collect();
            steps.push(ChainStep::Skolem {
                symbol: f.name.clone(),
                args,
            });
        } else {
            let vars: Vec<Var> = xs.iter().chain(&names[..i]).cloned().collect();
            steps.push(ChainStep::Base(random_term(rng, &vars, &cfg)));
        }
    }
    TermChain::new(xs, steps)
}

/// Chain outputs at `xs`, sampling table entries that are still missing.
fn fill_chain(s: &mut ModelSession, rng: &mut impl Rng, chain: &TermChain, table: &mut SkolemTable, xs: &[ModelElement]) -> Vec<ModelElement> {
    loop {
        match eval_chain(s, chain, table, xs) {
            Ok(ys) => return ys,
            Err(_) => {
                let mut env: BTreeMap<Var, ModelElement> = chain.xs.iter().cloned().zip(xs.iter().cloned()).collect();
                for (i, step) in chain.steps.iter().enumerate() {
                    let v = match step {
                        ChainStep::Skolem { symbol, args } => {
                            let args: Vec<ModelElement> = args.iter().map(|a| env[chain.arg_var(a)].clone()).collect();
                            if table.get(symbol, &args).is_err() {
                                let fresh = s.sample_element(rng);
                                table.set(symbol, args.clone(), fresh);
                            }
                            table.get(symbol, &args).unwrap().clone()
                        }
                        ChainStep::Base(t) => s.term_element(t, &env).unwrap(),
                    };
                    env.insert(chain.ys[i].clone(), v);
                }
            }
        }
    }
}

fn c10_skolem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut points = 0;
    for i in 0..100 {
        let sig = random_signature(&mut rng);
        let chain = random_chain(&mut rng, &sig);
        let (phi, chi) = split_term_chain(&sig, &chain).unwrap();
        let both = SkFormula::And(vec![SkFormula::Base(phi.clone()), chi.to_formula()]);
        let mut s = ModelSession::new(COMPLETIONS[i % 3], i as u64);
        let mut table = SkolemTable::default();
        for _ in 0..10 {
            let xs: Vec<ModelElement> = chain.xs.iter().map(|_| s.sample_element(&mut rng)).collect();
            let mut ys = fill_chain(&mut s, &mut rng, &chain, &mut table, &xs);
            if rng.gen_bool(0.5) {
                let j = rng.gen_range(0..ys.len());
                ys[j] = ys[j].add(&ModelElement::one());
            }
            let env: BTreeMap<Var, ModelElement> =
                chain.xs.iter().chain(&chain.ys).cloned().zip(xs.iter().chain(&ys).cloned()).collect();
            for e in chi.equations() {
                let args: Vec<ModelElement> = e.args.iter().map(|a| env[a].clone()).collect();
                if table.get(&e.symbol, &args).is_err() {
                    let fresh = s.sample_element(&mut rng);
                    table.set(&e.symbol, args, fresh);
                }
            }
            let lhs = eval_chain(&s, &chain, &table, &xs).unwrap() == ys;
            let rhs = eval_sk(&mut s, &table, &both, &env).unwrap();
            if lhs != rhs {
                return Err(format!("chain {i} {chain}: ȳ = chain(x̄) is {lhs}, φ ∧ χ is {rhs}"));
            }
            points += 1;
        }
    }

    let mut sound = 0;
    let mut attempts = 0;
    while sound < 50 {
        attempts += 1;
        if attempts > 20_000 {
            return Err(format!("only {sound} eligible instances found"));
        }
        let sig = random_signature(&mut rng);
        let vars: Vec<Var> = (0..4).map(|k| Var::new(format!("v{k}"))).collect();
        let mut chi = UniformConfiguration {
            vars: vars.clone(),
            conjuncts: Vec::new(),
        };
        for _ in 0..rng.gen_range(1..=3) {
            let f = sig.fns.choose(&mut rng).unwrap();
            chi.conjuncts.push(densevec::skolem::ConfigConjunct {
                symbol: f.name.clone(),
                args: (0..f.arity()).map(|_| rng.gen_range(0..4)).collect(),
                out: rng.gen_range(0..4),
            });
        }
        let code = eligibility_code(&sig, &chi).unwrap();
        let mut s = ModelSession::new(COMPLETIONS[attempts % 3], attempts as u64);
        let pool: Vec<ModelElement> = (0..3).map(|_| s.sample_element(&mut rng)).collect();
        let env: BTreeMap<Var, ModelElement> = vars.iter().map(|v| (v.clone(), pool.choose(&mut rng).unwrap().clone())).collect();
        let empty = SkolemTable::default();
        if !eval_sk(&mut s, &empty, &SkFormula::Base(code.clone()), &env).unwrap() {
            continue;
        }
        let mut table = SkolemTable::default();
        let eqs = chi.equations();
        for e in &eqs {
            table.set(&e.symbol, e.args.iter().map(|a| env[a].clone()).collect(), env[&e.out].clone());
        }
        if !eval_sk(&mut s, &table, &chi.to_formula(), &env).unwrap() {
            return Err(format!("χ' holds but the reassignment is not functional: {chi}"));
        }
        for f in &sig.fns {
            let only = SkolemSignature {
                fns: vec![f.clone()],
                ..sig.clone()
            };
            let pts: Vec<Vec<ModelElement>> =
                eqs.iter().filter(|e| e.symbol == f.name).map(|e| e.args.iter().map(|a| env[a].clone()).collect()).collect();
            let r = check_finite_model(&mut s, &only, &table, &pts).unwrap();
            if !r.ok() {
                return Err(format!("χ' holds but {} violates θ: {chi}\nχ' = {code}", f.name));
            }
        }
        sound += 1;
    }

    let cfg = SampleConfig {
        max_atoms: 3,
        ..SampleConfig::default()
    };
    for i in 0..50 {
        let sig = random_signature(&mut rng);
        let n = rng.gen_range(2..=4);
        let vars: Vec<Var> = (1..=n).map(|k| Var::new(format!("x{k}"))).collect();
        let phi = random_qf_formula(&mut rng, &vars, &cfg);
        let mut chi = UniformConfiguration {
            vars: vars.clone(),
            conjuncts: Vec::new(),
        };
        for _ in 0..rng.gen_range(0..=2) {
            let f = sig.fns.choose(&mut rng).unwrap();
            chi.conjuncts.push(densevec::skolem::ConfigConjunct {
                symbol: f.name.clone(),
                args: (0..f.arity()).map(|_| rng.gen_range(0..n)).collect(),
                out: rng.gen_range(0..n),
            });
        }
        let k = rng.gen_range(0..n);
        let ax = axiom_instance(&sig, &vars, &phi, &chi, k).unwrap();
        if !ax.free_vars().is_empty() {
            return Err(format!("axiom {i} has free variables: {ax}"));
        }
        let text = ax.to_string();
        if SkFormula::parse(&text, &sig).map_err(|e| e.to_string())? != ax {
            return Err(format!("axiom {i} does not round-trip: {text}"));
        }
    }
    Ok(format!("{points} chain points, {sound} eligible instances ({attempts} tried), 50 axioms round-trip"))
}

fn main() {
    let mut coh = Coherence::default();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("criterion {n:>2} {name}: PASS ({detail}; {:.1?})", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} {name}: FAIL ({detail})");
            }
        }
    };
    report(1, "qe-oracle agreement", &mut || c1_qe_oracle(&mut coh));
    report(2, "qe equivalence on open formulas", &mut c2_open_formulas);
    report(3, "vector-space laws", &mut c3_vector_space_laws);
    report(4, "density witnesses", &mut c4_density);
    report(5, "torsion-freeness", &mut || c5_torsion(&mut coh));
    report(6, "exchange property", &mut c6_exchange);
    report(7, "non-strongness array", &mut c7_nonstrong);
    report(8, "open-core smoke tests", &mut || c8_open_core(&mut coh));
    report(9, "decision coherence", &mut || c9_coherence(&coh));
    report(10, "skolem kit", &mut c10_skolem);
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
