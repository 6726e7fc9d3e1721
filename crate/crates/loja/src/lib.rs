//! Newton-boundary combinatorics for the gradient Łojasiewicz exponent θ₀.
//!
//! Everything polyhedral is computed with exact rational arithmetic: the
//! Newton polyhedron of a sparse polynomial, its facets and face lattice,
//! the dual subdivision of the non-negative weight cone, and the exponent
//! bounds read off from normalized weight vectors. Curve probing produces
//! matching lower-bound witnesses by exact order-of-vanishing computation
//! along monomial-sum curves.

pub mod bounds;
pub mod config;
pub mod curve;
pub mod diagram;
pub mod error;
pub mod newton;
pub mod numeric;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sweep;
pub mod tame;

pub use error::LojaError;
pub use poly::{Coefficient, ExponentVector, GaussianRational, Polynomial};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, LojaError>;
