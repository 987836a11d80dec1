//! Definable closure as Q(t)-span, and the exchange property.

use super::session::ModelElement;
use crate::qfield::linalg::solve;
use crate::qfield::RationalFunction;

fn width(es: &[&ModelElement]) -> usize {
    es.iter().filter_map(|e| e.max_generator()).max().map_or(0, |g| g + 1)
}

/// Coefficients `c` with `Σ c_i·zs[i] = target`, or `None` when the target
/// is outside the span.
pub fn span_membership(target: &ModelElement, zs: &[ModelElement]) -> Option<Vec<RationalFunction>> {
    let all: Vec<&ModelElement> = zs.iter().chain(std::iter::once(target)).collect();
    let n = width(&all);
    let cols: Vec<Vec<RationalFunction>> = zs.iter().map(|z| z.coordinates(n)).collect();
    let rhs = target.coordinates(n);
    if zs.is_empty() {
        return if target.is_zero() { Some(Vec::new()) } else { None };
    }
    let a: Vec<Vec<RationalFunction>> = (0..=n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    solve(&a, &rhs).expect("consistent shapes")
}

pub fn in_span(target: &ModelElement, zs: &[ModelElement]) -> bool {
    span_membership(target, zs).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeOutcome {
    Holds,
    Vacuous,
    Violation,
}

impl std::fmt::Display for ExchangeOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExchangeOutcome::Holds => "HOLDS",
            ExchangeOutcome::Vacuous => "VACUOUS",
            ExchangeOutcome::Violation => "VIOLATION",
        })
    }
}

/// If `a ∈ span(S ∪ {b}) \ span(S)`, whether `b ∈ span(S ∪ {a})`.
pub fn exchange_check(s: &[ModelElement], a: &ModelElement, b: &ModelElement) -> ExchangeOutcome {
    let with = |e: &ModelElement| -> Vec<ModelElement> { s.iter().cloned().chain(std::iter::once(e.clone())).collect() };
    if !in_span(a, &with(b)) || in_span(a, s) {
        return ExchangeOutcome::Vacuous;
    }
    if in_span(b, &with(a)) {
        ExchangeOutcome::Holds
    } else {
        ExchangeOutcome::Violation
    }
}
