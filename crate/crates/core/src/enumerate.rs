//! Exhaustive enumeration of allocations under an explicit budget.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::Allocation;

/// Default cap on the number of allocations (or guesses) an exhaustive
/// routine may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `n^m`, or `None` if it does not fit in a `u128`.
pub fn allocation_count(agents: usize, items: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for _ in 0..items {
        total = total.checked_mul(agents as u128)?;
    }
    Some(total)
}

pub fn check_budget(required: Option<u128>, budget: u64) -> Result<u128> {
    match required {
        Some(r) if r <= budget as u128 => Ok(r),
        Some(r) => Err(Error::BudgetExceeded { required: r.to_string(), budget }),
        None => Err(Error::BudgetExceeded { required: "more than 2^128".into(), budget }),
    }
}

/// Visit every owner vector in lexicographic order (item 0 most significant).
///
/// Fails up front if `n^m` exceeds `budget`; the callback can stop early with
/// `ControlFlow::Break`.
pub fn for_each_owner_vector<B, F>(agents: usize, items: usize, budget: u64, mut f: F) -> Result<Option<B>>
where
    F: FnMut(&[usize]) -> ControlFlow<B>,
{
    check_budget(allocation_count(agents, items), budget)?;
    let mut owner = vec![0usize; items];
    loop {
        if let ControlFlow::Break(b) = f(&owner) {
            return Ok(Some(b));
        }
        // Odometer increment from the last item.
        let mut k = items;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            owner[k] += 1;
            if owner[k] < agents {
                break;
            }
            owner[k] = 0;
        }
    }
}

/// Collect all allocations of `items` items to `agents` agents.
pub fn all_allocations(agents: usize, items: usize, budget: u64) -> Result<Vec<Allocation>> {
    let mut out = Vec::new();
    for_each_owner_vector::<(), _>(agents, items, budget, |owner| {
        out.push(Allocation::new(agents, owner.to_vec()).expect("owners in range"));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
