//! Invariant Markov operators on discrete groupoids.
//!
//! Groupoids (groups, equivalence relations, actions, semi-direct products)
//! carry fiberwise transition systems that are iterated exactly on sparse
//! measures. On top of that sit total-variation diagnostics for the 0–2 law,
//! Doob transforms by positive harmonic functions, and tree boundary kernels.

pub mod diagnostics;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod harmonic;
pub mod measure;
pub mod models;
pub mod operator;
pub mod text;
pub mod weight;

pub use error::{Error, Result};
