use std::collections::BTreeMap;
use std::time::Instant;

use densevec::logic::{Formula, Var};
use densevec::model::{eval_formula, prepare, eval_prepared, ModelElement, ModelSession};
use densevec::qe::{decide, elim_quantifiers, Completion};
use densevec::sample::{random_formula, random_sentence, SampleConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sentences_agree_with_oracle() {
    let cfg = SampleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    for (i, c) in [Completion::GermPosInf, Completion::GermZeroPlus, Completion::SeededGeneric(11)]
        .iter()
        .cycle()
        .take(200)
        .enumerate()
    {
        let f = random_sentence(&mut rng, &cfg);
        let d = decide(&f, c).unwrap();
        let mut s = ModelSession::new(*c, i as u64);
        let o = eval_formula(&mut s, &f, &BTreeMap::new()).unwrap();
        assert_eq!(d, o, "sentence {i}: {f} under {c}");
    }
    eprintln!("200 sentences in {:?}", start.elapsed());
}

#[test]
fn open_formulas_agree_at_points() {
    let cfg = SampleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let vars = [Var::new("a"), Var::new("b")];
    let start = Instant::now();
    for i in 0..60 {
        let f = random_formula(&mut rng, &vars, &cfg);
        let q = elim_quantifiers(&f).unwrap().formula;
        let pf = prepare(&f).unwrap();
        let mut s = ModelSession::new(Completion::GermPosInf, i);
        for _ in 0..10 {
            let env: BTreeMap<Var, ModelElement> =
                vars.iter().map(|v| (v.clone(), s.sample_element(&mut rng))).collect();
            let lhs = eval_prepared(&mut s, &pf, &env).unwrap();
            let rhs = s.eval_formula(&q, &env).unwrap();
            assert_eq!(lhs, rhs, "formula {i}: {f}\nqe: {q}\nenv: {env:?}");
        }
        let _: &Formula = &q;
    }
    eprintln!("60 open formulas in {:?}", start.elapsed());
}
