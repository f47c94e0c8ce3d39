//! Littlewood-Paley theory on the grid: dyadic blocks, Besov norms,
//! paraproducts and commutators.

pub mod besov;
pub mod bony;
pub mod partition;

pub use besov::{besov_norm, BesovParams, BesovVariant};
pub use bony::{
    bony_block_decompose, bony_split, commutator, BlockDecomposition, BonySplit, CommutatorKind,
};
pub use partition::{chi, phi, DyadicPartition};
