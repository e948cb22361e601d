//! Stable and almost-stable Kneser hypergraphs.
//!
//! The crate covers vertex enumeration, properness checks, explicit
//! colorings, exact chromatic numbers, LP model export, Tucker-style
//! labelings with their chain properties, and the composition recursion that
//! lifts monochromatic-edge finders from prime to composite uniformity.

pub mod coloring;
pub mod composition;
pub mod error;
pub mod hypergraph;
pub mod ilp;
pub mod sets;
pub mod sign;
pub mod solver;
pub mod tucker;

pub use error::{Error, Result};
pub use hypergraph::{Coloring, KneserInstance, WitnessEdge};
pub use sets::{KSubset, StabilityVariant};
pub use sign::SignVector;
