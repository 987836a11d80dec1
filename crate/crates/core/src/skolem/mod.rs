//! Skolem expansions of `T_t`: signatures, uniform configurations, term
//! chains and the instances of the ∃^∞ axiom scheme.

mod semantics;
mod signature;
mod syntax;

pub use semantics::{
    axiom_instance, axiom_instance_with, check_finite_model, DefaultEligibility, EligibilityCoder, eligibility_code, eval_chain, eval_sk, instantiate, FiniteCheckReport, SkolemTable,
    Violation,
};
pub use signature::{iterate_language, skolem_fn_from_sexp, skolem_fn_string, SkolemFn, SkolemSignature, Theta};
pub use syntax::{
    sk_formula_from_sexp, split_term_chain, ChainArg, ChainStep, ConfigConjunct, SkEq, SkFormula, TermChain, UniformConfiguration,
};
