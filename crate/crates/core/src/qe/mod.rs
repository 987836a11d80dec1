//! Quantifier elimination, completions and decision for `T_t`.

mod completion;
mod decide;
mod eliminate;
mod topo;

pub use completion::{completion_less, completion_sign, laurent_at, seeded_sign, Completion, SeededParams, Sign};
pub use decide::{decide, decide_with_stats, eval_ground, ground_atom_truth, resolve_ground};
pub use eliminate::{
    elim_exists_conjunct, elim_exists_conjunct_formula, elim_exists_inf, elim_quantifiers, elim_quantifiers_in, QeResult, QeStats,
};
pub use topo::{closure, closure_in, interior, interior_in, is_open, topo, TopoMode, TopoOutput};
