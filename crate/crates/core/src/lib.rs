//! Fair division of indivisible items when agents care about who receives
//! every item, not only about their own bundle.
//!
//! Every agent `i` holds a value `V_i(j, a)` for item `a` going to agent `j`,
//! and the value of an allocation is the sum over items. Envy from `i` towards
//! `j` is measured by swapping the two bundles. On top of that model the crate
//! provides:
//!
//! * [`model`]: instances, allocations, envy gaps, removal effects, item types,
//!   chore classification and normalization, all over exact [`Value`]s;
//! * [`fairness`]: EF, EF1, EFX and EF2 verdicts with per-pair witnesses;
//! * [`solvers`]: exhaustive search, the bundle-type enumeration backed by a
//!   small integer feasibility search, and the EF2 construction for `n > m`;
//! * [`welfare`]: utilitarian and Nash welfare, the welfare-maximizing greedy
//!   and brute-force Pareto / Nash oracles;
//! * [`reductions`]: two-valued to binary, correlated valuations to plain
//!   additive utilities, team and network constructors, round-robin;
//! * [`generators`]: hardness constructions with witness allocations and a
//!   seeded random instance generator.

pub mod enumerate;
pub mod error;
pub mod fairness;
pub mod generators;
pub mod model;
pub mod reductions;
pub mod solvers;
pub mod value;
pub mod welfare;

pub use error::{Error, Result};
pub use fairness::{FairnessNotion, FairnessVerdict};
pub use model::{Allocation, Instance};
pub use value::Value;
