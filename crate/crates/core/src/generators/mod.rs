//! Instance generators.
//!
//! Three hardness constructions, each with the allocation its proof builds
//! from a certificate, plus seeded random instances and a few cubic graphs.

pub mod bisection;
pub mod clique;
pub mod graphs;
pub mod partition;
pub mod random;

pub use bisection::{bisection_to_efx_instance, bisection_witness, CubicGraphSeed};
pub use clique::{clique_to_ef_instance, clique_witness, CliqueSeed};
pub use partition::{partition_to_efx_instance, partition_witness, PartitionSeed};
pub use random::{random_instance, ValueDomain};
