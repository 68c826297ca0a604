//! The formula algebra `Φ(X)`: syntax trees, parser, printer and the action
//! of substitutions.

mod ast;
mod parse;

pub use ast::{apply_subst_formula, Formula, FormulaContext};
pub use parse::parse_formula;
