//! Monadic second-order logic over finitely presented binary words.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: finite, ultimately periodic, bi-infinite and gap-predicate words.
//! * [`formula`]: MSO syntax, parser, quantifier rank and syntactic transformations.
//! * [`automata`]: DFA/NFA/NBA over bit-track alphabets, transition profiles.
//! * [`compiler`]: formula to automaton translation plus a brute-force evaluator.
//! * [`types`]: rank-k Hintikka types and everything built on them.
//! * [`decide`]: model checking, gap-predicate decisions and indicators.
//! * [`biinf`]: bi-infinite word analysis and constructions.
//! * [`cli`]: the command-line front end.

pub mod automata;
pub mod biinf;
pub mod cli;
pub mod compiler;
pub mod decide;
mod error;
pub mod formula;
pub mod types;
pub mod words;

pub use error::{Error, Result};
