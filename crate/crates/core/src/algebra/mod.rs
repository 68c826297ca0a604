//! Signatures, free term algebras, substitutions and finite models.

pub mod clone;
pub mod iso;
pub mod model;
pub mod signature;
pub mod subst;
pub mod term;

pub use clone::{term_functions, TermClone, TermFunction};
pub use iso::{model_isomorphisms, ModelMap};
pub use model::{eval_term, Model, ModelBuilder};
pub use signature::{Signature, Symbol};
pub use subst::{compose_subst, substitutions_up_to_depth, Substitution};
pub use term::{parse_term, terms_up_to_depth, Term, VarSet};
