//! Exact transseries arithmetic over effective differential ambient fields,
//! with lazy expansions, distinguished solutions of quasi-linear
//! differential equations and a zero test for the resulting extensions.

pub mod cli;
pub mod diffpoly;
pub mod error;
pub mod field_tower;
pub mod lazy_series;
pub mod linear_ode;
pub mod order_core;
pub mod transbasis;
pub mod zerotest;

#[cfg(test)]
mod test_support;

pub use error::{Axiom, Error, Result};
