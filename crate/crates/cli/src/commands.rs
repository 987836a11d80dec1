//! Per-command work: read one input text, produce items and a session.

use densevec::logic::sexp::{read_all, Sexp};
use densevec::logic::{alpha_rename, canonical, formula_from_sexp, parse_term, print_canonical, term_from_sexp, Formula, Var};
use densevec::model::{exchange_check, nonstrong_demo, span_membership, ModelElement, ModelSession};
use densevec::qe::{
    closure_in, decide_with_stats, elim_exists_inf, elim_quantifiers, interior_in, is_open, QeStats,
};
use densevec::qfield::{Rational, RationalFunction};
use densevec::skolem::{
    axiom_instance, check_finite_model, split_term_chain, SkolemSignature, SkolemTable, TermChain, UniformConfiguration,
};
use densevec::Error;
use serde_json::{json, Value as Json};

use crate::{Cli, Command, Failure, Item, Output};

type Res<T> = Result<T, Failure>;

fn bad(message: impl Into<String>) -> Failure {
    Failure::Input(message.into())
}

fn stats_json(s: &QeStats) -> Json {
    json!({ "dnf_branches": s.dnf_branches, "fm_steps": s.fm_steps })
}

fn stats_line(s: &QeStats) -> String {
    format!("; dnf-branches {} fm-steps {}", s.dnf_branches, s.fm_steps)
}

fn formulas(text: &str) -> Res<Vec<Formula>> {
    let forms = read_all(text)?;
    if forms.is_empty() {
        return Err(bad("no input formulas"));
    }
    forms.iter().map(|e| Ok(alpha_rename(&formula_from_sexp(e)?))).collect()
}

fn formula_item(f: &Formula, stats: Option<&QeStats>, cli: &Cli) -> Item {
    let s = print_canonical(f);
    let mut text = vec![s.clone()];
    if let (true, Some(st)) = (cli.stats, stats) {
        text.push(stats_line(st));
    }
    let mut j = json!({ "formula": s });
    if let Some(st) = stats {
        j["stats"] = stats_json(st);
    }
    Item { text, json: j }
}

fn verdict_item(v: bool, stats: Option<&QeStats>, cli: &Cli) -> Item {
    let mut text = vec![if v { "TRUE" } else { "FALSE" }.to_string()];
    if let (true, Some(st)) = (cli.stats, stats) {
        text.push(stats_line(st));
    }
    let mut j = json!({ "verdict": v });
    if let Some(st) = stats {
        j["stats"] = stats_json(st);
    }
    Item { text, json: j }
}

fn coordinates(f: &Formula, vars: &[String]) -> Res<Vec<Var>> {
    if vars.is_empty() {
        return Ok(f.free_vars().into_iter().collect());
    }
    vars.iter().map(|v| Ok(Var::new(v.trim()))).collect()
}

fn rf(text: &str) -> Res<RationalFunction> {
    Ok(RationalFunction::parse(text.trim())?)
}

fn rational(text: &str) -> Res<Rational> {
    text.trim().parse::<Rational>().map_err(|_| bad(format!("not a rational number: `{}`", text.trim())))
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// `(lo,hi)` with rational endpoints.
fn interval(text: &str) -> Res<(Rational, Rational)> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad(format!("expected `(lo,hi)`, got `{text}`")))?;
    let (lo, hi) = inner.split_once(',').ok_or_else(|| bad(format!("expected `(lo,hi)`, got `{text}`")))?;
    Ok((rational(lo)?, rational(hi)?))
}

fn element(text: &str) -> Res<ModelElement> {
    Ok(ModelElement::from_term(&parse_term(text.trim())?)?)
}

fn element_from_sexp(e: &Sexp) -> Res<ModelElement> {
    Ok(ModelElement::from_term(&term_from_sexp(e)?)?)
}

fn elements(text: &str) -> Res<Vec<ModelElement>> {
    split_list(text).into_iter().map(element).collect()
}

fn session(cli: &Cli) -> ModelSession {
    ModelSession::new(cli.completion, cli.seed)
}

fn with_session(items: Vec<Item>, s: ModelSession) -> Output {
    Output { items, session: Some(s) }
}

fn plain(items: Vec<Item>) -> Output {
    Output { items, session: None }
}

pub fn run(cli: &Cli, text: &str) -> Res<Output> {
    let c = &cli.completion;
    match &cli.command {
        Command::Decide(_) => {
            let mut items = Vec::new();
            for f in formulas(text)? {
                let (v, st) = decide_with_stats(&f, c)?;
                items.push(verdict_item(v, Some(&st), cli));
            }
            Ok(plain(items))
        }
        Command::Qe(_) => {
            let mut items = Vec::new();
            for f in formulas(text)? {
                let r = elim_quantifiers(&f)?;
                items.push(formula_item(&r.formula, Some(&r.stats), cli));
            }
            Ok(plain(items))
        }
        Command::Einf { var, .. } => {
            let mut items = Vec::new();
            for f in formulas(text)? {
                let r = elim_quantifiers(&f)?;
                let out = match var {
                    Some(x) => elim_exists_inf(&Var::new(x.trim()), &r.formula)?,
                    None => r.formula,
                };
                items.push(formula_item(&canonical(&out), Some(&r.stats), cli));
            }
            Ok(plain(items))
        }
        Command::Interior { vars, .. } | Command::Closure { vars, .. } => {
            let interior = matches!(cli.command, Command::Interior { .. });
            let mut items = Vec::new();
            for f in formulas(text)? {
                let xs = coordinates(&f, vars)?;
                let out = if interior { interior_in(&f, &xs, c)? } else { closure_in(&f, &xs, c)? };
                items.push(formula_item(&out, None, cli));
            }
            Ok(plain(items))
        }
        Command::IsOpen { vars, .. } => {
            let mut items = Vec::new();
            for f in formulas(text)? {
                let xs = coordinates(&f, vars)?;
                items.push(verdict_item(is_open(&f, &xs, c)?, None, cli));
            }
            Ok(plain(items))
        }
        Command::Witness { dirs, boxes } => witness(cli, dirs, boxes),
        Command::Span { target, set } => {
            let t = element(target)?;
            let zs = elements(set)?;
            let item = match span_membership(&t, &zs) {
                Some(cs) => {
                    let mut text = vec!["IN SPAN".to_string()];
                    text.extend(zs.iter().zip(&cs).map(|(z, q)| format!("coeff {z} = {q}")));
                    let coeffs: Vec<String> = cs.iter().map(ToString::to_string).collect();
                    Item { text, json: json!({ "verdict": true, "coefficients": coeffs }) }
                }
                None => Item { text: vec!["NOT IN SPAN".into()], json: json!({ "verdict": false }) },
            };
            Ok(plain(vec![item]))
        }
        Command::Exchange { set, a, b } => {
            let out = exchange_check(&elements(set)?, &element(a)?, &element(b)?);
            Ok(plain(vec![Item { text: vec![out.to_string()], json: json!({ "verdict": out.to_string() }) }]))
        }
        Command::Nonstrong { rows, cols, path } => nonstrong(cli, rows, cols, path),
        Command::SkolemSplit(_) => skolem_split(text),
        Command::SkolemAxiom(_) => skolem_axiom(text),
        Command::SkolemCheck(_) => skolem_check(cli, text),
    }
}

fn witness(cli: &Cli, dirs: &str, boxes: &str) -> Res<Output> {
    let qs = split_list(dirs).into_iter().map(rf).collect::<Res<Vec<_>>>()?;
    let bs = split_list(boxes).into_iter().map(interval).collect::<Res<Vec<_>>>()?;
    let mut s = session(cli);
    let g = s.witness_in_boxes(&qs, &bs)?;
    let mut text = Vec::new();
    let mut listing = Vec::new();
    for q in &qs {
        let v = s.element_value(&g.scale(q))?;
        text.push(format!("lam {q} {g} = {}", v.standard));
        listing.push(json!({ "direction": q.to_string(), "standard": v.standard.to_string(), "value": v.to_string() }));
    }
    Ok(with_session(vec![Item { text, json: json!({ "element": g.to_string(), "values": listing }) }], s))
}

fn nonstrong(cli: &Cli, rows: &str, cols: &str, path: &[usize]) -> Res<Output> {
    let qs = split_list(rows).into_iter().map(rf).collect::<Res<Vec<_>>>()?;
    let bs = split_list(cols).into_iter().map(interval).collect::<Res<Vec<_>>>()?;
    let mut s = session(cli);
    let r = nonstrong_demo(&mut s, &qs, &bs, path)?;
    let mut text = vec![format!("witness {}", r.witness)];
    for (q, v) in qs.iter().zip(&r.values) {
        text.push(format!("lam {q} {} = {}", r.witness, v.standard));
    }
    for p in &r.pair_checks {
        text.push(format!("row {} cols {} {}: {}", p.row, p.cols.0, p.cols.1, p.result));
    }
    text.push(format!("rows pairwise inconsistent: {}", r.rows_pairwise_inconsistent()));
    let j = json!({
        "witness": r.witness.to_string(),
        "values": r.values.iter().map(|v| v.standard.to_string()).collect::<Vec<_>>(),
        "pair_checks": r.pair_checks.iter().map(|p| json!({ "row": p.row, "cols": [p.cols.0, p.cols.1], "result": p.result.to_string() })).collect::<Vec<_>>(),
        "verdict": r.rows_pairwise_inconsistent(),
    });
    Ok(with_session(vec![Item { text, json: j }], s))
}

/// The leading `(signature …)` form and the rest.
fn signature_and_rest(text: &str) -> Res<(SkolemSignature, Vec<Sexp>)> {
    let mut forms = read_all(text)?.into_iter();
    let first = forms.next().ok_or_else(|| bad("expected a (signature …) form"))?;
    if first.head() != Some("signature") {
        return Err(first.error("expected a (signature …) form").into());
    }
    Ok((SkolemSignature::from_sexp(&first)?, forms.collect()))
}

fn skolem_split(text: &str) -> Res<Output> {
    let (sig, rest) = signature_and_rest(text)?;
    let mut items = Vec::new();
    for e in &rest {
        let chain = TermChain::from_sexp(e, &sig)?;
        let (phi, chi) = split_term_chain(&sig, &chain)?;
        let (p, x) = (print_canonical(&phi), chi.to_string());
        items.push(Item { text: vec![format!("phi: {p}"), format!("chi: {x}")], json: json!({ "phi": p, "chi": x }) });
    }
    Ok(plain(items))
}

/// `(axiom (vars x1 … xn) (k K) φ (config …))`
fn skolem_axiom(text: &str) -> Res<Output> {
    let (sig, rest) = signature_and_rest(text)?;
    let mut items = Vec::new();
    for e in &rest {
        let shape = || e.error("expected (axiom (vars …) (k n) φ (config …))");
        let parts = e.as_list().filter(|p| p.len() == 5 && e.head() == Some("axiom")).ok_or_else(shape)?;
        let vars = match parts[1].as_list() {
            Some([h, vs @ ..]) if h.as_atom() == Some("vars") => {
                vs.iter().map(|v| v.as_atom().map(Var::new).ok_or_else(|| v.error("expected a variable"))).collect::<Result<Vec<_>, Error>>()?
            }
            _ => return Err(parts[1].error("expected (vars …)").into()),
        };
        let k = match parts[2].as_list() {
            Some([h, n]) if h.as_atom() == Some("k") => {
                n.as_atom().and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| n.error("expected a natural number"))?
            }
            _ => return Err(parts[2].error("expected (k n)").into()),
        };
        let phi = formula_from_sexp(&parts[3])?;
        let chi = UniformConfiguration::from_sexp(&parts[4], &sig)?;
        let ax = axiom_instance(&sig, &vars, &phi, &chi, k)?.to_string();
        items.push(Item { text: vec![ax.clone()], json: json!({ "formula": ax }) });
    }
    Ok(plain(items))
}

/// `(table (= (F a…) v) …)` and `(points (a…) …)` over generator terms.
fn skolem_check(cli: &Cli, text: &str) -> Res<Output> {
    let (sig, rest) = signature_and_rest(text)?;
    let mut table = SkolemTable::default();
    let mut points: Vec<Vec<ModelElement>> = Vec::new();
    for e in &rest {
        match e.head() {
            Some("table") => {
                for entry in &e.as_list().unwrap()[1..] {
                    let shape = || entry.error("expected (= (F args…) value)");
                    let [eq, app, value] = entry.as_list().ok_or_else(shape)? else { return Err(shape().into()) };
                    if eq.as_atom() != Some("=") {
                        return Err(shape().into());
                    }
                    let (name, args) = match app.as_list() {
                        Some([f, args @ ..]) => (f.as_atom().ok_or_else(shape)?, args),
                        _ => return Err(shape().into()),
                    };
                    let f = sig.lookup(name)?;
                    if f.arity() != args.len() {
                        return Err(Error::ArityMismatch(format!("{name} takes {} arguments, got {}", f.arity(), args.len())).into());
                    }
                    let args = args.iter().map(element_from_sexp).collect::<Res<Vec<_>>>()?;
                    table.set(name, args, element_from_sexp(value)?);
                }
            }
            Some("points") => {
                for p in &e.as_list().unwrap()[1..] {
                    let items = p.as_list().ok_or_else(|| p.error("expected a list of elements"))?;
                    points.push(items.iter().map(element_from_sexp).collect::<Res<Vec<_>>>()?);
                }
            }
            _ => return Err(e.error("expected (table …) or (points …)").into()),
        }
    }
    let mut s = session(cli);
    let top = table
        .entries
        .iter()
        .flat_map(|((_, args), v)| args.iter().chain(std::iter::once(v)))
        .chain(points.iter().flatten())
        .filter_map(ModelElement::max_generator)
        .max();
    if let Some(g) = top {
        s.ensure_generators(g);
    }
    let report = check_finite_model(&mut s, &sig, &table, &points)?;
    let mut text = vec![format!("checked {}", report.checked)];
    let fmt_args = |args: &[ModelElement]| args.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    for v in &report.violations {
        text.push(format!("violation ({} {}) = {}", v.symbol, fmt_args(&v.args), v.value));
    }
    text.push(if report.ok() { "OK" } else { "FAIL" }.into());
    let j = json!({
        "verdict": report.ok(),
        "checked": report.checked,
        "violations": report.violations.iter().map(|v| json!({ "symbol": v.symbol, "args": v.args.iter().map(ToString::to_string).collect::<Vec<_>>(), "value": v.value.to_string() })).collect::<Vec<_>>(),
    });
    Ok(with_session(vec![Item { text, json: j }], s))
}
