//! First-order logic on words: formulas, the DSL, quantifier and predicate
//! registry, bounded semantics, and relabelling along alphabet maps.

mod eval;
mod formula;
mod parse;
mod registry;
mod relabel;

pub use eval::{equiv_bounded, equiv_witness, models, models_in, satisfies, Compiled};
pub use formula::Formula;
pub use parse::{parse, parse_formula_file};
pub use registry::{marking_alphabet, MonoidQuantifier, NumPred, Presentation, Quantifier, Registry};
pub use relabel::relabel;

pub(crate) use eval::models_compiled;
pub(crate) use parse::check_variables;
