//! Maximum nilpotent Jordan types in the centralizer of a nilpotent matrix.
//!
//! [`oblak::q_of`] computes the maximal type `Q(B)` combinatorially; the other
//! modules build the structured matrices involved and check the combinatorics
//! against exact linear algebra over prime fields.

pub mod centralizer;
pub mod dominance;
pub mod elimination;
pub mod field;
pub mod oblak;
pub mod partition;
pub mod rb_graph;
pub mod rng;
pub mod sweep;
pub mod verify;

pub use field::{FieldMatrix, PrimeModulus};
pub use oblak::{q_of, OblakStep};
pub use partition::{Partition, PartitionError};
