//! Regular languages: automata, monoids, stamps, and finite algebras of
//! regular languages.

mod algebra;
mod bounded;
mod dfa;
mod monoid;
mod stamp;

pub use algebra::{quotient_closure, DfaAlgebra};
pub use bounded::dfa_from_bounded;
pub use dfa::Dfa;
pub use monoid::FinMonoid;
pub use stamp::{factor_stamp, syntactic_stamp, syntactic_stamp_of_ba, Factorization, Stamp};
