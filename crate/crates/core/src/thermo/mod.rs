//! Counting, entropies and thermal states of exciton ensembles.

pub mod entropy;
pub mod packing;
pub mod thermal;
