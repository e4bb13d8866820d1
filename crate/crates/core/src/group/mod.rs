//! Finite p-groups inside the ambient product `K × C × D`.

mod ambient;
mod finite;
mod indexed;
mod recognition;
mod table;

pub use ambient::{is_prime, AmbientDescriptor, GroupElement, Variant, DEFAULT_GUARD};
pub use finite::{FiniteGroup, SeriesKind, SubgroupSeries};
pub use indexed::{derived_mask, generated, IndexedGroup, TableGroup};
pub use recognition::{
    find_isomorphism, isomorphic_bruteforce, presentation_hom_search, recognize_g, ClauseCheck, Recognition,
    Relations, DEFAULT_ORACLE_BOUND,
};
pub use table::KTable;

#[cfg(test)]
mod tests;
