//! Python bindings. Formulas and elements cross the boundary as `.qts`
//! text; results come back as canonical text, booleans or lists.

use dv::logic::{parse_formula, parse_term, print_canonical, Formula as CoreFormula, Var};
use dv::model::{self, ModelElement, ModelSession};
use dv::qe::{self, Completion as CoreCompletion};
use dv::qfield::{Rational, RationalFunction};
use dv::skolem::{self, SkolemSignature as CoreSignature, TermChain, UniformConfiguration};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: dv::Error) -> PyErr {
    use dv::Error as E;
    match e {
        E::Parse { .. }
        | E::UnboundVariable(_)
        | E::FreeVariables(_)
        | E::UnknownSymbol(_)
        | E::ArityMismatch(_)
        | E::MalformedTheta(_)
        | E::NotQuantifierFree
        | E::QuantifierInDnfInput
        | E::SessionFormat(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn completion(name: &str) -> PyResult<CoreCompletion> {
    name.parse().map_err(err)
}

fn formula(text: &str) -> PyResult<CoreFormula> {
    parse_formula(text).map_err(err)
}

fn element(text: &str) -> PyResult<ModelElement> {
    ModelElement::from_term(&parse_term(text).map_err(err)?).map_err(err)
}

fn rational(text: &str) -> PyResult<Rational> {
    text.trim().parse().map_err(|_| PyValueError::new_err(format!("not a rational number: `{text}`")))
}

fn coordinates(f: &CoreFormula, vars: Option<Vec<String>>) -> Vec<Var> {
    match vars {
        Some(vs) => vs.into_iter().map(Var::new).collect(),
        None => f.free_vars().into_iter().collect(),
    }
}

/// A parsed formula of `L_t`.
#[pyclass(frozen, module = "densevec")]
struct Formula {
    inner: CoreFormula,
}

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Formula { inner: formula(text)? })
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().map(|v| v.name().to_string()).collect()
    }

    fn is_quantifier_free(&self) -> bool {
        self.inner.is_quantifier_free()
    }

    /// Quantifier-free equivalent.
    fn qe(&self) -> PyResult<Formula> {
        Ok(Formula { inner: qe::elim_quantifiers(&self.inner).map_err(err)?.formula })
    }

    #[pyo3(signature = (completion = "germ-pos-inf"))]
    fn decide(&self, completion: &str) -> PyResult<bool> {
        qe::decide(&self.inner, &self::completion(completion)?).map_err(err)
    }

    fn __str__(&self) -> String {
        print_canonical(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}')", print_canonical(&self.inner))
    }

    fn __eq__(&self, other: &Formula) -> bool {
        self.inner == other.inner
    }
}

/// An element of `Q(t)`.
#[pyclass(frozen, module = "densevec")]
struct RatFunc {
    inner: RationalFunction,
}

#[pymethods]
impl RatFunc {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(RatFunc { inner: RationalFunction::parse(text).map_err(err)? })
    }

    fn __add__(&self, o: &RatFunc) -> RatFunc {
        RatFunc { inner: self.inner.add(&o.inner) }
    }

    fn __sub__(&self, o: &RatFunc) -> RatFunc {
        RatFunc { inner: self.inner.sub(&o.inner) }
    }

    fn __mul__(&self, o: &RatFunc) -> RatFunc {
        RatFunc { inner: self.inner.mul(&o.inner) }
    }

    fn __truediv__(&self, o: &RatFunc) -> PyResult<RatFunc> {
        Ok(RatFunc { inner: self.inner.mul(&o.inner.inv().map_err(err)?) })
    }

    fn __neg__(&self) -> RatFunc {
        RatFunc { inner: self.inner.neg() }
    }

    fn __eq__(&self, o: &RatFunc) -> bool {
        self.inner == o.inner
    }

    /// -1, 0 or 1 under the completion.
    #[pyo3(signature = (completion = "germ-pos-inf"))]
    fn sign(&self, completion: &str) -> PyResult<i8> {
        Ok(match qe::completion_sign(&self::completion(completion)?, &self.inner) {
            qe::Sign::Neg => -1,
            qe::Sign::Zero => 0,
            qe::Sign::Pos => 1,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RatFunc('{}')", self.inner)
    }
}

/// A lazily extended model of `T_t`.
#[pyclass(module = "densevec")]
struct Session {
    inner: ModelSession,
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (completion = "germ-pos-inf", seed = 0))]
    fn new(completion: &str, seed: u64) -> PyResult<Self> {
        Ok(Session { inner: ModelSession::new(self::completion(completion)?, seed) })
    }

    #[staticmethod]
    fn restore(text: &str) -> PyResult<Self> {
        Ok(Session { inner: ModelSession::restore(text).map_err(err)? })
    }

    fn dump(&self) -> String {
        self.inner.dump()
    }

    #[getter]
    fn completion(&self) -> String {
        self.inner.completion.to_string()
    }

    /// A fresh generator with `λ_{dirs[i]}(g)` in the open interval
    /// `boxes[i]`; returns the element and the standard part per direction.
    fn witness(&mut self, dirs: Vec<String>, boxes: Vec<(String, String)>) -> PyResult<(String, Vec<(String, String)>)> {
        let qs = dirs.iter().map(|d| RationalFunction::parse(d).map_err(err)).collect::<PyResult<Vec<_>>>()?;
        let bs = boxes.iter().map(|(lo, hi)| Ok((rational(lo)?, rational(hi)?))).collect::<PyResult<Vec<_>>>()?;
        let g = self.inner.witness_in_boxes(&qs, &bs).map_err(err)?;
        let mut out = Vec::new();
        for q in &qs {
            let v = self.inner.element_value(&g.scale(q)).map_err(err)?;
            out.push((q.to_string(), v.standard.to_string()));
        }
        Ok((g.to_string(), out))
    }

    /// Truth of a formula whose free variables are bound to elements.
    fn eval(&mut self, f: &Formula, env: Vec<(String, String)>) -> PyResult<bool> {
        let mut m = std::collections::BTreeMap::new();
        for (x, e) in env {
            let e = element(&e)?;
            if let Some(g) = e.max_generator() {
                self.inner.ensure_generators(g);
            }
            m.insert(Var::new(x), e);
        }
        self.inner.eval_formula(&f.inner, &m).map_err(err)
    }

    /// Value of an element: standard part and infinitesimal tail.
    fn value(&mut self, e: &str) -> PyResult<String> {
        let e = element(e)?;
        if let Some(g) = e.max_generator() {
            self.inner.ensure_generators(g);
        }
        Ok(self.inner.element_value(&e).map_err(err)?.to_string())
    }
}

/// A Skolem signature read from `(signature …)`.
#[pyclass(frozen, module = "densevec")]
struct SkolemSignature {
    inner: CoreSignature,
}

#[pymethods]
impl SkolemSignature {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(SkolemSignature { inner: CoreSignature::parse(text).map_err(err)? })
    }

    #[getter]
    fn level(&self) -> usize {
        self.inner.level
    }

    fn symbols(&self) -> Vec<String> {
        self.inner.fns.iter().map(|f| f.name.clone()).collect()
    }

    /// Base and Skolem parts `(φ, χ)` of a `(chain …)`.
    fn split(&self, chain: &str) -> PyResult<(String, String)> {
        let c = TermChain::parse(chain, &self.inner).map_err(err)?;
        let (phi, chi) = skolem::split_term_chain(&self.inner, &c).map_err(err)?;
        Ok((print_canonical(&phi), chi.to_string()))
    }

    /// χ' for a `(config …)`.
    fn eligibility_code(&self, config: &str) -> PyResult<String> {
        let chi = UniformConfiguration::parse(config, &self.inner).map_err(err)?;
        Ok(print_canonical(&skolem::eligibility_code(&self.inner, &chi).map_err(err)?))
    }

    /// The ∃^∞ axiom instance for `vars`, `k`, `φ` and a `(config …)`.
    fn axiom(&self, vars: Vec<String>, k: usize, phi: &str, config: &str) -> PyResult<String> {
        let vars: Vec<Var> = vars.into_iter().map(Var::new).collect();
        let chi = UniformConfiguration::parse(config, &self.inner).map_err(err)?;
        Ok(skolem::axiom_instance(&self.inner, &vars, &formula(phi)?, &chi, k).map_err(err)?.to_string())
    }

    fn __str__(&self) -> String {
        self.inner.to_sexp_string()
    }
}

#[pyfunction]
#[pyo3(signature = (text, completion = "germ-pos-inf"))]
fn decide(text: &str, completion: &str) -> PyResult<bool> {
    qe::decide(&formula(text)?, &self::completion(completion)?).map_err(err)
}

#[pyfunction]
fn elim_quantifiers(text: &str) -> PyResult<String> {
    Ok(print_canonical(&qe::elim_quantifiers(&formula(text)?).map_err(err)?.formula))
}

/// `∃^∞ var` over a quantifier-free formula.
#[pyfunction]
fn elim_exists_inf(var: &str, text: &str) -> PyResult<String> {
    let f = qe::elim_quantifiers(&formula(text)?).map_err(err)?.formula;
    Ok(print_canonical(&qe::elim_exists_inf(&Var::new(var), &f).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (text, vars = None, completion = "germ-pos-inf"))]
fn interior(text: &str, vars: Option<Vec<String>>, completion: &str) -> PyResult<String> {
    let f = formula(text)?;
    Ok(print_canonical(&qe::interior_in(&f, &coordinates(&f, vars), &self::completion(completion)?).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (text, vars = None, completion = "germ-pos-inf"))]
fn closure(text: &str, vars: Option<Vec<String>>, completion: &str) -> PyResult<String> {
    let f = formula(text)?;
    Ok(print_canonical(&qe::closure_in(&f, &coordinates(&f, vars), &self::completion(completion)?).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (text, vars = None, completion = "germ-pos-inf"))]
fn is_open(text: &str, vars: Option<Vec<String>>, completion: &str) -> PyResult<bool> {
    let f = formula(text)?;
    qe::is_open(&f, &coordinates(&f, vars), &self::completion(completion)?).map_err(err)
}

/// Coefficients expressing `target` over `span`, or `None`.
#[pyfunction]
fn span_membership(target: &str, span: Vec<String>) -> PyResult<Option<Vec<String>>> {
    let zs = span.iter().map(|z| element(z)).collect::<PyResult<Vec<_>>>()?;
    Ok(model::span_membership(&element(target)?, &zs).map(|cs| cs.iter().map(ToString::to_string).collect()))
}

/// `"HOLDS"`, `"VACUOUS"` or `"VIOLATION"`.
#[pyfunction]
fn exchange_check(set: Vec<String>, a: &str, b: &str) -> PyResult<String> {
    let s = set.iter().map(|z| element(z)).collect::<PyResult<Vec<_>>>()?;
    Ok(model::exchange_check(&s, &element(a)?, &element(b)?).to_string())
}

#[pymodule]
fn densevec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<RatFunc>()?;
    m.add_class::<Session>()?;
    m.add_class::<SkolemSignature>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(elim_quantifiers, m)?)?;
    m.add_function(wrap_pyfunction!(elim_exists_inf, m)?)?;
    m.add_function(wrap_pyfunction!(interior, m)?)?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(is_open, m)?)?;
    m.add_function(wrap_pyfunction!(span_membership, m)?)?;
    m.add_function(wrap_pyfunction!(exchange_check, m)?)?;
    Ok(())
}
