//! Shared helpers for the integration tests: a literal evaluator of the
//! fairness definitions and small random instance builders.

#![allow(dead_code)]

use fdx_core::enumerate::all_allocations;
use fdx_core::generators::{random_instance, ValueDomain};
use fdx_core::model::PartialAssignment;
use fdx_core::{Allocation, FairnessNotion, Instance, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `V_i(λ^{i↔j}) − V_i(λ)` by evaluating both assignments in full.
fn swap_gain(inst: &Instance, lambda: &PartialAssignment, i: usize, j: usize) -> Value {
    lambda.swapped(i, j).value_for(inst, i) - lambda.value_for(inst, i)
}

/// Whether pair `(i, j)` satisfies `notion`, evaluated straight from the
/// definitions: every removal builds the reduced assignment explicitly.
pub fn literal_pair(inst: &Instance, alloc: &Allocation, i: usize, j: usize, notion: FairnessNotion) -> bool {
    let m = inst.item_count();
    let gap = swap_gain(inst, &alloc.without(&[]), i, j);
    let after = |removed: &[usize]| swap_gain(inst, &alloc.without(removed), i, j);
    match notion {
        FairnessNotion::Ef => !gap.is_positive(),
        // Without items there is nothing to remove and no envy either.
        FairnessNotion::Ef1 if m == 0 => !gap.is_positive(),
        FairnessNotion::Ef1 => (0..m).any(|a| !after(&[a]).is_positive()),
        FairnessNotion::Efx => {
            !gap.is_positive()
                || (0..m).all(|a| {
                    let g = after(&[a]);
                    // Only removals that strictly reduce the envy must clear it.
                    g >= gap || !g.is_positive()
                })
        }
        FairnessNotion::Ef2 => {
            !gap.is_positive()
                || (0..m).any(|a| !after(&[a]).is_positive())
                || (0..m).any(|a| (a + 1..m).any(|b| !after(&[a, b]).is_positive()))
        }
    }
}

pub fn literal(inst: &Instance, alloc: &Allocation, notion: FairnessNotion) -> bool {
    let n = inst.agents();
    (0..n).all(|i| (0..n).all(|j| i == j || literal_pair(inst, alloc, i, j, notion)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random instance with entries from `lo..=hi`.
pub fn random_small(rng: &mut ChaCha8Rng, n: usize, m: usize, lo: i64, hi: i64) -> Instance {
    random_from(rng, n, m, &(lo..=hi).collect::<Vec<_>>())
}

pub fn random_from(rng: &mut ChaCha8Rng, n: usize, m: usize, values: &[i64]) -> Instance {
    random_instance(n, m, &ValueDomain::integers(values.iter().copied()), rng.random()).unwrap()
}

/// Random instance whose items are copies of a few random columns, so item
/// types repeat.
pub fn random_clustered(rng: &mut ChaCha8Rng, n: usize, m: usize, columns: usize, values: &[i64]) -> Instance {
    let cols: Vec<Vec<i64>> = (0..columns)
        .map(|_| (0..n * n).map(|_| values[rng.random_range(0..values.len())]).collect())
        .collect();
    let pick: Vec<usize> = (0..m).map(|_| rng.random_range(0..columns)).collect();
    Instance::from_fn(n, Instance::default_item_names(m), |i, j, a| Value::from(cols[pick[a]][i * n + j])).unwrap()
}

pub fn every_allocation(inst: &Instance) -> Vec<Allocation> {
    all_allocations(inst.agents(), inst.item_count(), 1 << 20).unwrap()
}
