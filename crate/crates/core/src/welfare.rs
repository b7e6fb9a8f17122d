//! Utilitarian and Nash welfare.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::enumerate::for_each_owner_vector;
use crate::error::{Error, Result};
use crate::fairness::{self, FairnessNotion};
use crate::model::{value_unchecked, Allocation, Instance};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WelfareReport {
    pub utilities: Vec<Value>,
    pub utilitarian: Value,
    /// Product of utilities; `None` when some utility is negative.
    pub nash: Option<Value>,
}

impl WelfareReport {
    pub fn from_utilities(utilities: Vec<Value>) -> Self {
        let utilitarian = utilities.iter().sum();
        let nash = utilities
            .iter()
            .all(|u| !u.is_negative())
            .then(|| utilities.iter().fold(Value::one(), |acc, u| acc * u));
        WelfareReport { utilities, utilitarian, nash }
    }
}

pub fn welfare_report(inst: &Instance, alloc: &Allocation) -> Result<WelfareReport> {
    inst.check_allocation(alloc)?;
    Ok(WelfareReport::from_utilities(utilities(inst, alloc.owners())))
}

fn utilities(inst: &Instance, owner: &[usize]) -> Vec<Value> {
    (0..inst.agents()).map(|i| value_unchecked(inst, owner, i)).collect()
}

/// `Σ_i V_i(j, a)`: the total welfare of giving `a` to `j`.
fn column_sum(inst: &Instance, j: usize, a: usize) -> Value {
    (0..inst.agents()).map(|i| inst.value(i, j, a)).sum()
}

/// Give every item to an agent maximizing the column sum `Σ_i V_i(j, a)`,
/// lowest index on ties. Welfare is additive over items, so the result
/// maximizes utilitarian welfare; among such maximizers it is Pareto optimal.
pub fn msw_po_greedy(inst: &Instance) -> Allocation {
    let owner = (0..inst.item_count())
        .map(|a| {
            let mut best = 0;
            let mut best_sum = column_sum(inst, 0, a);
            for j in 1..inst.agents() {
                let s = column_sum(inst, j, a);
                if s > best_sum {
                    best = j;
                    best_sum = s;
                }
            }
            best
        })
        .collect();
    Allocation::new(inst.agents(), owner).expect("owners in range")
}

/// Largest utilitarian welfare over all allocations.
pub fn max_utilitarian_bruteforce(inst: &Instance, budget: u64) -> Result<Value> {
    let mut best: Option<Value> = None;
    for_each_owner_vector::<(), _>(inst.agents(), inst.item_count(), budget, |owner| {
        let w: Value = utilities(inst, owner).into_iter().sum();
        if best.as_ref().is_none_or(|b| &w > b) {
            best = Some(w);
        }
        ControlFlow::Continue(())
    })?;
    Ok(best.unwrap_or_else(Value::zero))
}

/// `true` iff no allocation gives every agent at least as much and some agent
/// strictly more.
pub fn is_pareto_optimal(inst: &Instance, alloc: &Allocation, budget: u64) -> Result<bool> {
    inst.check_allocation(alloc)?;
    let base = utilities(inst, alloc.owners());
    let dominated = for_each_owner_vector(inst.agents(), inst.item_count(), budget, |owner| {
        let u = utilities(inst, owner);
        let weakly = u.iter().zip(&base).all(|(x, y)| x >= y);
        if weakly && u.iter().zip(&base).any(|(x, y)| x > y) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(dominated.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NashOptimum {
    pub value: Value,
    /// Every maximizer, in lexicographic order of owner vectors.
    pub allocations: Vec<Allocation>,
}

/// Exact set of Nash-welfare maximizers. Fails if any allocation gives some
/// agent a negative utility.
pub fn max_nash_bruteforce(inst: &Instance, budget: u64) -> Result<NashOptimum> {
    let n = inst.agents();
    let mut best = NashOptimum { value: Value::zero(), allocations: Vec::new() };
    let negative = for_each_owner_vector(n, inst.item_count(), budget, |owner| {
        let u = utilities(inst, owner);
        if let Some(agent) = u.iter().position(Value::is_negative) {
            return ControlFlow::Break(Error::NegativeUtility { agent, utility: u[agent].to_string() });
        }
        let nw = u.iter().fold(Value::one(), |acc, x| acc * x);
        if best.allocations.is_empty() || nw > best.value {
            best.value = nw.clone();
            best.allocations.clear();
        }
        if nw == best.value {
            best.allocations.push(Allocation::new(n, owner.to_vec()).expect("owners in range"));
        }
        ControlFlow::Continue(())
    })?;
    match negative {
        Some(err) => Err(err),
        None => Ok(best),
    }
}

/// `true` iff no Nash-welfare maximizer is EFX.
pub fn nash_efx_counterexample_check(inst: &Instance, budget: u64) -> Result<bool> {
    let opt = max_nash_bruteforce(inst, budget)?;
    Ok(!opt
        .allocations
        .iter()
        .any(|a| fairness::is_fair(inst, a.owners(), FairnessNotion::Efx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: i64) -> Value {
        Value::from_int(n)
    }

    /// Four identical items; agent 0 values only its own, the others value
    /// items held by themselves or by agent 1.
    fn nash_instance(n: usize) -> Instance {
        Instance::from_fn(n, Instance::default_item_names(4), |i, j, _| match (i, j) {
            (0, 0) => v(1),
            (0, _) => v(0),
            (_, j) if j == i || j == 1 => v(1),
            _ => v(0),
        })
        .unwrap()
    }

    #[test]
    fn nash_maximizers_give_one_item_to_the_first_agent_and_three_to_the_second() {
        for n in [3, 4] {
            let inst = nash_instance(n);
            let opt = max_nash_bruteforce(&inst, 1_000).unwrap();
            assert_eq!(opt.allocations.len(), 4);
            for a in &opt.allocations {
                let sizes = a.bundle_sizes();
                assert_eq!((sizes[0], sizes[1]), (1, 3));
            }
            assert!(nash_efx_counterexample_check(&inst, 1_000).unwrap());
        }
    }

    #[test]
    fn greedy_on_nash_instance_gives_everything_to_the_second_agent() {
        let alloc = msw_po_greedy(&nash_instance(3));
        assert_eq!(alloc.owners(), &[1, 1, 1, 1]);
    }

    #[test]
    fn all_zero_greedy_uses_first_agent() {
        let inst = Instance::zeros(3, Instance::default_item_names(2)).unwrap();
        assert_eq!(msw_po_greedy(&inst).owners(), &[0, 0]);
        let empty = Instance::zeros(2, vec![]).unwrap();
        let report = welfare_report(&empty, &msw_po_greedy(&empty)).unwrap();
        assert_eq!(report.utilitarian, v(0));
        assert_eq!(report.nash, Some(v(0)));
    }

    #[test]
    fn pareto_examples() {
        let inst = nash_instance(3);
        assert!(is_pareto_optimal(&inst, &Allocation::all_to(3, 4, 0).unwrap(), 1_000).unwrap());
        assert!(!is_pareto_optimal(&inst, &Allocation::all_to(3, 4, 2).unwrap(), 1_000).unwrap());
    }

    #[test]
    fn negative_utilities_make_nash_undefined() {
        let inst = Instance::from_fn(2, Instance::default_item_names(1), |_, _, _| v(-1)).unwrap();
        assert!(matches!(max_nash_bruteforce(&inst, 10), Err(Error::NegativeUtility { .. })));
        let r = welfare_report(&inst, &Allocation::all_to(2, 1, 0).unwrap()).unwrap();
        assert_eq!(r.nash, None);
        assert_eq!(r.utilitarian, v(-2));
    }

    fn instance() -> impl Strategy<Value = Instance> {
        (1usize..=3, 0usize..=4).prop_flat_map(|(n, m)| {
            proptest::collection::vec(-2i64..=3, n * n * m).prop_map(move |vals| {
                Instance::from_tensor(n, Instance::default_item_names(m), vals.into_iter().map(Value::from).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn greedy_is_optimal_and_pareto(inst in instance()) {
            let alloc = msw_po_greedy(&inst);
            let report = welfare_report(&inst, &alloc).unwrap();
            prop_assert_eq!(&report.utilitarian, &max_utilitarian_bruteforce(&inst, 10_000).unwrap());
            prop_assert!(is_pareto_optimal(&inst, &alloc, 10_000).unwrap());
        }

        #[test]
        fn greedy_value_is_order_invariant(inst in instance(), rot in 0usize..4) {
            let m = inst.item_count();
            let keep: Vec<usize> = (0..m).map(|k| (k + rot) % m.max(1)).collect();
            let permuted = inst.restrict_items(&keep);
            let a = welfare_report(&inst, &msw_po_greedy(&inst)).unwrap().utilitarian;
            let b = welfare_report(&permuted, &msw_po_greedy(&permuted)).unwrap().utilitarian;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn constant_agent_scales_nash(us in proptest::collection::vec(0i64..5, 1..4), c in 0i64..5) {
            let base = WelfareReport::from_utilities(us.iter().map(|&u| v(u)).collect());
            let mut more: Vec<Value> = us.iter().map(|&u| v(u)).collect();
            more.push(v(c));
            let ext = WelfareReport::from_utilities(more);
            prop_assert_eq!(ext.nash.unwrap(), base.nash.unwrap() * v(c));
            prop_assert_eq!(&base.utilitarian, &base.utilities.iter().sum::<Value>());
        }
    }
}
