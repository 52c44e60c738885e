//! Combinatorial models for stratified homotopy theory over finite posets.

pub mod builtin;
pub mod diagrams;
pub mod dot;
pub mod error;
pub mod filtered;
pub mod gen;
pub mod homotopy;
pub mod json;
pub mod lifting;
pub mod numeric;
pub mod poset;
pub mod setdiagram;
pub mod simplicial;
pub mod union_find;

pub use error::{Error, Result};
pub use poset::{Chain, Poset, PosetMap};
pub use simplicial::{Budget, GenRef, SMap, SSet, SimplexTerm};

pub type RealPoint64 = numeric::RealPoint<f64>;
pub type RealPoint32 = numeric::RealPoint<f32>;
