//! Logic on finite words with generalized quantifiers: formulas and their
//! models, finite Boolean algebras of languages and their atoms, syntactic
//! monoids, the substitution of formulas for letters, free-variable
//! encodings, and two-sided semidirect product recognizers.

pub mod caps;
pub mod error;
pub mod finba;
pub mod layers;
pub mod logic;
pub mod random;
pub mod regular;
pub mod report;
pub mod semidirect;
pub mod substitution;
pub mod varcode;
pub mod words;

pub use caps::Caps;
pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/words.md")]
mod book_words {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/logic.md")]
mod book_logic {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/finba.md")]
mod book_finba {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/regular.md")]
mod book_regular {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/substitution.md")]
mod book_substitution {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/varcode.md")]
mod book_varcode {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/semidirect.md")]
mod book_semidirect {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/layers.md")]
mod book_layers {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
