//! 2-class groups along the cyclotomic Z_2-towers over `Q(sqrt(d), i)` and
//! `Q(sqrt(-d))`.
//!
//! The crate is layered bottom up: [`arith`] and [`symbols`] are the integer
//! kernel, [`qforms`] computes class groups of imaginary quadratic fields,
//! [`diophantine`] solves the representation problems behind the residue
//! criteria, and [`classifier`] turns all of it into families, predictions and
//! Iwasawa invariants.

pub mod arith;
pub mod classifier;
pub mod diophantine;
mod error;
pub mod qforms;
pub mod symbols;

pub use arith::OddSquarefree;
pub use error::{Error, Result};
pub use qforms::{ClassGroupOracle, ClassGroupStructure, Discriminant, FormClass};
pub use symbols::SymbolValue;
