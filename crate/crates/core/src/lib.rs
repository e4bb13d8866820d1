//! Verification toolkit for non-isomorphic 2-groups `G`, `H` whose group
//! algebras over `F₂` are isomorphic, together with the odd-prime invariants
//! of the same construction.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod family;
pub mod group;
pub mod invariants;
pub mod report;
pub mod witness;

pub use error::{Error, Result};
