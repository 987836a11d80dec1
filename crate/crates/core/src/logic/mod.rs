//! Terms and formulas of `L_t`: parsing, printing, normal forms.

mod formula;
mod normal;
mod parse;
mod print;
pub mod sexp;
mod term;

pub use formula::{fresh_var, Atom, Formula, Rel};
pub use normal::{
    canonical, dnf_clauses, eval_qf, ground_truth, less, nnf, normalize_atom, simplify, to_nnf_dnf, Mode,
};
pub use parse::{
    alpha_rename, formula_from_sexp, is_identifier, parse, parse_formula, parse_sentence, parse_term,
    raw_term_from_sexp, rf_from_sexp, term_from_sexp, variable_from_sexp, Parsed,
};
pub use print::{print_atom, print_canonical, print_term};
pub use term::{normalize_to_linear, LinearTerm, RawTerm, Var};
