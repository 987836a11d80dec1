//! A computable, lazily extended model of `T_t` and an independent
//! evaluation oracle.

mod feasible;
mod nonstrong;
mod oracle;
mod session;
mod span;
mod value;

pub use feasible::{extreme_rays, numeric_feasible, Feasibility, LinConstraint};
pub use nonstrong::{nonstrong_demo, NonstrongReport, PairCheck};
pub use oracle::{eval_formula, eval_prepared, oracle_eliminate, prepare};
pub use session::{Generator, ModelElement, ModelSession};
pub use span::{exchange_check, in_span, span_membership, ExchangeOutcome};
pub use value::{GenericValue, Value};
