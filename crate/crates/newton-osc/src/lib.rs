//! Polyhedral decay analysis for oscillatory integrals with polynomial
//! phases: exact Newton-polyhedron and toric-fan computation of the
//! predicted leading decay, plus desk-scale numeric verification.

pub mod error;
pub mod linalg;
pub mod lp;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod rays;

pub use error::{Error, Result};
pub use poly::{MultiIndex, Polynomial};
