//! Exact-arithmetic toolkit for digit sequences and their p-adic values.
//!
//! The crate generates automatic, morphic, and Sturmian sequences with exact
//! integer arithmetic, measures their combinatorial regularity (subword
//! complexity, prefix repetitions, repetition-exponent evidence), and turns
//! those measurements into verified p-adic approximation data: rational
//! approximants with heights, exact p-adic distances, and degree-1
//! approximation-exponent estimates feeding a Mahler-class prediction report.
//!
//! Everything is deterministic and float-free on the decision paths. Hot
//! loops run on rayon when the default `parallel` feature is enabled and fall
//! back to plain iteration without it; results are identical either way.

pub mod classify;
pub mod complexity;
pub mod error;
pub mod generators;
pub mod padic;
pub mod quadratic;
pub mod repetition;
pub mod words;

mod par;

pub use error::{Error, Result};
pub use words::{FiniteWord, Symbol};
