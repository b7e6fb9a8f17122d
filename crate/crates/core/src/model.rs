//! Instances, allocations and the quantities every fairness notion is built
//! from.
//!
//! Agents and items are addressed by zero-based indices. Item identifiers are
//! opaque strings kept only for I/O.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::value::Value;

/// Agents, items and the full valuation tensor `V_i(j, a)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    agents: usize,
    items: Vec<String>,
    /// Laid out as `[(i * n + j) * m + a]`.
    values: Vec<Value>,
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Instance")
            .field("agents", &self.agents)
            .field("items", &self.items)
            .finish_non_exhaustive()
    }
}

impl Instance {
    /// Build an instance by evaluating `value(i, j, a)` on every triple.
    pub fn from_fn<F>(agents: usize, items: Vec<String>, mut value: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize) -> Value,
    {
        check_header(agents, &items)?;
        let m = items.len();
        let mut values = Vec::with_capacity(agents * agents * m);
        for i in 0..agents {
            for j in 0..agents {
                for a in 0..m {
                    values.push(value(i, j, a));
                }
            }
        }
        Ok(Instance { agents, items, values })
    }

    /// Build an instance from a dense tensor laid out as `[(i * n + j) * m + a]`.
    pub fn from_tensor(agents: usize, items: Vec<String>, values: Vec<Value>) -> Result<Self> {
        check_header(agents, &items)?;
        let expected = agents * agents * items.len();
        if values.len() != expected {
            return Err(Error::TensorShape { expected, found: values.len() });
        }
        Ok(Instance { agents, items, values })
    }

    /// All-zero instance, the usual starting point for sparse constructions.
    pub fn zeros(agents: usize, items: Vec<String>) -> Result<Self> {
        Self::from_fn(agents, items, |_, _, _| Value::zero())
    }

    /// Items named `a1..am`.
    pub fn default_item_names(m: usize) -> Vec<String> {
        (1..=m).map(|k| format!("a{k}")).collect()
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn item_index(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|x| x == id)
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, a: usize) -> usize {
        (i * self.agents + j) * self.items.len() + a
    }

    /// `V_i(j, a)`: what agent `i` gets from item `a` being held by agent `j`.
    #[inline]
    pub fn value(&self, i: usize, j: usize, a: usize) -> &Value {
        &self.values[self.offset(i, j, a)]
    }

    /// Overwrite one entry. Only meant for building instances.
    pub fn set(&mut self, i: usize, j: usize, a: usize, v: Value) {
        let k = self.offset(i, j, a);
        self.values[k] = v;
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// The item-type vector `(V_1(1,a), ..., V_1(n,a), V_2(1,a), ..., V_n(n,a))`.
    pub fn type_vector(&self, a: usize) -> Vec<Value> {
        let n = self.agents;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.value(i, j, a).clone());
            }
        }
        out
    }

    /// Same agents, only the items in `keep` (in that order).
    pub fn restrict_items(&self, keep: &[usize]) -> Instance {
        let items = keep.iter().map(|&a| self.items[a].clone()).collect();
        Instance::from_fn(self.agents, items, |i, j, k| self.value(i, j, keep[k]).clone())
            .expect("restriction of a valid instance")
    }

    pub(crate) fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.agents {
            return Err(Error::UnknownAgent { agent, agents: self.agents });
        }
        Ok(())
    }

    pub(crate) fn check_allocation(&self, alloc: &Allocation) -> Result<()> {
        if alloc.agents() != self.agents {
            return Err(Error::AgentCountMismatch { expected: self.agents, found: alloc.agents() });
        }
        if alloc.item_count() != self.items.len() {
            return Err(Error::ItemCountMismatch {
                expected: self.items.len(),
                found: alloc.item_count(),
            });
        }
        Ok(())
    }
}

fn check_header(agents: usize, items: &[String]) -> Result<()> {
    if agents == 0 {
        return Err(Error::NoAgents);
    }
    let mut seen = HashSet::with_capacity(items.len());
    for id in items {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateItem(id.clone()));
        }
    }
    Ok(())
}

/// A partition of the items into `n` possibly empty bundles, stored as the
/// owner of every item. Every item has exactly one owner by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    agents: usize,
    owner: Vec<usize>,
}

impl Allocation {
    pub fn new(agents: usize, owner: Vec<usize>) -> Result<Self> {
        if agents == 0 {
            return Err(Error::NoAgents);
        }
        if let Some(&agent) = owner.iter().find(|&&o| o >= agents) {
            return Err(Error::UnknownAgent { agent, agents });
        }
        Ok(Allocation { agents, owner })
    }

    /// Build from explicit bundles; every item `0..m` must appear exactly once.
    pub fn from_bundles(m: usize, bundles: &[Vec<usize>]) -> Result<Self> {
        let mut owner = vec![usize::MAX; m];
        for (agent, bundle) in bundles.iter().enumerate() {
            for &a in bundle {
                if a >= m {
                    return Err(Error::UnknownItem(format!("#{a}")));
                }
                if owner[a] != usize::MAX {
                    return Err(Error::DuplicateItem(format!("#{a}")));
                }
                owner[a] = agent;
            }
        }
        if let Some(a) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::UnassignedItem(format!("#{a}")));
        }
        Allocation::new(bundles.len(), owner)
    }

    /// Everything to one agent.
    pub fn all_to(agents: usize, m: usize, agent: usize) -> Result<Self> {
        Allocation::new(agents, vec![agent; m])
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn item_count(&self) -> usize {
        self.owner.len()
    }

    /// `π(a)`.
    pub fn owner(&self, a: usize) -> usize {
        self.owner[a]
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    /// `π_i` as ascending item indices.
    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        (0..self.owner.len()).filter(|&a| self.owner[a] == agent).collect()
    }

    pub fn bundles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.agents];
        for (a, &o) in self.owner.iter().enumerate() {
            out[o].push(a);
        }
        out
    }

    pub fn bundle_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.agents];
        for &o in &self.owner {
            out[o] += 1;
        }
        out
    }

    /// `π^{i↔j}`.
    pub fn swapped(&self, i: usize, j: usize) -> Allocation {
        let owner = self
            .owner
            .iter()
            .map(|&o| if o == i { j } else if o == j { i } else { o })
            .collect();
        Allocation { agents: self.agents, owner }
    }

    /// The partial assignment `λ` with `λ_ℓ = π_ℓ \ removed` for every agent.
    pub fn without(&self, removed: &[usize]) -> PartialAssignment {
        let mut owner: Vec<Option<usize>> = self.owner.iter().map(|&o| Some(o)).collect();
        for &a in removed {
            owner[a] = None;
        }
        PartialAssignment { agents: self.agents, owner }
    }
}

/// An assignment where some items may be left out, as produced by removing
/// items from an allocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment {
    agents: usize,
    owner: Vec<Option<usize>>,
}

impl PartialAssignment {
    pub fn owner(&self, a: usize) -> Option<usize> {
        self.owner[a]
    }

    pub fn swapped(&self, i: usize, j: usize) -> PartialAssignment {
        let owner = self
            .owner
            .iter()
            .map(|o| o.map(|o| if o == i { j } else if o == j { i } else { o }))
            .collect();
        PartialAssignment { agents: self.agents, owner }
    }

    /// Value for `agent`, summing only over assigned items.
    pub fn value_for(&self, inst: &Instance, agent: usize) -> Value {
        let mut total = Value::zero();
        for (a, o) in self.owner.iter().enumerate() {
            if let Some(j) = o {
                total += inst.value(agent, *j, a);
            }
        }
        total
    }
}

/// `V_i(π) = Σ_a V_i(π(a), a)`.
pub fn value_of_allocation(inst: &Instance, alloc: &Allocation, agent: usize) -> Result<Value> {
    inst.check_allocation(alloc)?;
    inst.check_agent(agent)?;
    Ok(value_unchecked(inst, alloc.owners(), agent))
}

pub(crate) fn value_unchecked(inst: &Instance, owner: &[usize], agent: usize) -> Value {
    let mut total = Value::zero();
    for (a, &j) in owner.iter().enumerate() {
        total += inst.value(agent, j, a);
    }
    total
}

/// Envy of `i` towards `j`: `V_i(π^{i↔j}) − V_i(π)`. Positive means envy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyGap {
    pub i: usize,
    pub j: usize,
    pub gap: Value,
}

pub fn envy_gap(inst: &Instance, alloc: &Allocation, i: usize, j: usize) -> Result<EnvyGap> {
    check_pair(inst, alloc, i, j)?;
    Ok(EnvyGap { i, j, gap: gap_unchecked(inst, alloc.owners(), i, j) })
}

/// `V_i(i,a) − V_i(j,a)`: the change in `i`'s swap gain contributed by item
/// `a` sitting in `π_j`. Items in `π_i` contribute the negation.
#[inline]
pub(crate) fn own_minus_other(inst: &Instance, i: usize, j: usize, a: usize) -> Value {
    inst.value(i, i, a) - inst.value(i, j, a)
}

pub(crate) fn gap_unchecked(inst: &Instance, owner: &[usize], i: usize, j: usize) -> Value {
    let mut gap = Value::zero();
    for (a, &o) in owner.iter().enumerate() {
        if o == j {
            gap += own_minus_other(inst, i, j, a);
        } else if o == i {
            gap -= own_minus_other(inst, i, j, a);
        }
    }
    gap
}

#[inline]
pub(crate) fn delta_unchecked(inst: &Instance, owner: &[usize], i: usize, j: usize, a: usize) -> Value {
    let o = owner[a];
    if o == j {
        own_minus_other(inst, i, j, a)
    } else if o == i {
        -own_minus_other(inst, i, j, a)
    } else {
        Value::zero()
    }
}

/// Per-item removal effects for one ordered pair.
///
/// Removing item `a` turns the gap into `gap − δ(a)`. Items held by a third
/// agent have `δ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    pub i: usize,
    pub j: usize,
    pub deltas: Vec<Value>,
}

impl DeltaTable {
    pub fn delta(&self, a: usize) -> &Value {
        &self.deltas[a]
    }

    pub fn gap_after_removal(&self, gap: &Value, removed: &[usize]) -> Value {
        removed.iter().fold(gap.clone(), |g, &a| g - &self.deltas[a])
    }
}

pub fn delta_table(inst: &Instance, alloc: &Allocation, i: usize, j: usize) -> Result<DeltaTable> {
    check_pair(inst, alloc, i, j)?;
    let deltas = (0..inst.item_count())
        .map(|a| delta_unchecked(inst, alloc.owners(), i, j, a))
        .collect();
    Ok(DeltaTable { i, j, deltas })
}

fn check_pair(inst: &Instance, alloc: &Allocation, i: usize, j: usize) -> Result<()> {
    inst.check_allocation(alloc)?;
    inst.check_agent(i)?;
    inst.check_agent(j)?;
    if i == j {
        return Err(Error::SameAgent(i));
    }
    Ok(())
}

/// One item type: a representative valuation vector and its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemType {
    pub vector: Vec<Value>,
    pub members: Vec<usize>,
}

impl ItemType {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Items grouped by identical `n²` valuation vectors, types in order of first
/// appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemTypePartition {
    pub types: Vec<ItemType>,
    /// `type_of[a]` is the index of `a`'s type.
    pub type_of: Vec<usize>,
}

impl ItemTypePartition {
    /// `τ`.
    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.types.iter().map(ItemType::multiplicity).collect()
    }

    /// Representative item of type `t`.
    pub fn representative(&self, t: usize) -> usize {
        self.types[t].members[0]
    }
}

pub fn item_types(inst: &Instance) -> ItemTypePartition {
    let mut index: HashMap<Vec<Value>, usize> = HashMap::new();
    let mut types: Vec<ItemType> = Vec::new();
    let mut type_of = Vec::with_capacity(inst.item_count());
    for a in 0..inst.item_count() {
        let vector = inst.type_vector(a);
        let t = match index.get(&vector) {
            Some(&t) => t,
            None => {
                let t = types.len();
                index.insert(vector.clone(), t);
                types.push(ItemType { vector, members: Vec::new() });
                t
            }
        };
        types[t].members.push(a);
        type_of.push(t);
    }
    ItemTypePartition { types, type_of }
}

/// Number of distinct values `d` across the whole tensor.
pub fn distinct_value_count(inst: &Instance) -> usize {
    inst.values.iter().collect::<HashSet<_>>().len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChoreKind {
    None,
    /// Some other holder is strictly better for the agent.
    Weak,
    /// No other holder is worse and at least one is strictly better.
    Strong,
}

impl ChoreKind {
    pub fn is_weak(self) -> bool {
        matches!(self, ChoreKind::Weak | ChoreKind::Strong)
    }
}

/// `[agent][item]` chore classification. With a single agent every entry is
/// [`ChoreKind::None`].
pub fn classify_chores(inst: &Instance) -> Vec<Vec<ChoreKind>> {
    let n = inst.agents();
    (0..n)
        .map(|i| {
            (0..inst.item_count())
                .map(|a| {
                    if n < 2 {
                        return ChoreKind::None;
                    }
                    let own = inst.value(i, i, a);
                    let others = (0..n).filter(|&j| j != i).map(|j| inst.value(i, j, a));
                    let mut all_geq = true;
                    let mut any_gt = false;
                    for v in others {
                        if v < own {
                            all_geq = false;
                        }
                        if v > own {
                            any_gt = true;
                        }
                    }
                    match (all_geq, any_gt) {
                        (true, true) => ChoreKind::Strong,
                        (_, true) => ChoreKind::Weak,
                        _ => ChoreKind::None,
                    }
                })
                .collect()
        })
        .collect()
}

pub fn has_weak_chores(inst: &Instance) -> bool {
    classify_chores(inst).iter().flatten().any(|k| k.is_weak())
}

/// `x_{i,a} = min_j V_i(j, a)`, laid out as `[i][a]`.
pub fn normalization_shifts(inst: &Instance) -> Vec<Vec<Value>> {
    (0..inst.agents())
        .map(|i| {
            (0..inst.item_count())
                .map(|a| {
                    (0..inst.agents())
                        .map(|j| inst.value(i, j, a))
                        .min()
                        .cloned()
                        .expect("at least one agent")
                })
                .collect()
        })
        .collect()
}

/// Subtract `min_j V_i(j, a)` from every `V_i(·, a)`. All values become
/// nonnegative and every swap gain is preserved exactly.
pub fn normalize(inst: &Instance) -> Instance {
    let shifts = normalization_shifts(inst);
    Instance::from_fn(inst.agents(), inst.items().to_vec(), |i, j, a| {
        inst.value(i, j, a) - &shifts[i][a]
    })
    .expect("normalizing a valid instance")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> Value {
        Value::from_int(n)
    }

    /// Two agents, items `a`, `b`: `V_k(k,a)=2`, `V_k(k,b)=1`, cross values 0.
    fn ex1() -> Instance {
        Instance::from_fn(2, vec!["a".into(), "b".into()], |i, j, a| {
            if i != j {
                v(0)
            } else if a == 0 {
                v(2)
            } else {
                v(1)
            }
        })
        .unwrap()
    }

    #[test]
    fn value_of_allocation_sums_over_holders() {
        let inst = ex1();
        let pi = Allocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(value_of_allocation(&inst, &pi, 1).unwrap(), v(1));
        assert_eq!(value_of_allocation(&inst, &pi, 0).unwrap(), v(2));
    }

    #[test]
    fn value_of_allocation_rejects_bad_inputs() {
        let inst = ex1();
        let pi = Allocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        assert!(matches!(
            value_of_allocation(&inst, &pi, 2),
            Err(Error::UnknownAgent { agent: 2, agents: 2 })
        ));
        let short = Allocation::new(2, vec![0]).unwrap();
        assert!(matches!(
            value_of_allocation(&inst, &short, 0),
            Err(Error::ItemCountMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn envy_gap_and_deltas_on_two_item_example() {
        let inst = ex1();
        let pi = Allocation::from_bundles(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(envy_gap(&inst, &pi, 1, 0).unwrap().gap, v(1));
        let table = delta_table(&inst, &pi, 1, 0).unwrap();
        assert_eq!(table.deltas, vec![v(2), v(-1)]);
        assert!(matches!(envy_gap(&inst, &pi, 1, 1), Err(Error::SameAgent(1))));
        assert!(matches!(delta_table(&inst, &pi, 0, 0), Err(Error::SameAgent(0))));
    }

    #[test]
    fn empty_bundles_have_zero_gap() {
        let inst = Instance::from_fn(3, Instance::default_item_names(2), |i, j, a| {
            v((i * 7 + j * 3 + a) as i64)
        })
        .unwrap();
        let pi = Allocation::all_to(3, 2, 2).unwrap();
        assert!(envy_gap(&inst, &pi, 0, 1).unwrap().gap.is_zero());
    }

    #[test]
    fn type_and_value_statistics() {
        let inst = ex1();
        assert_eq!(distinct_value_count(&inst), 3);
        assert_eq!(item_types(&inst).len(), 2);
        let empty = Instance::zeros(3, vec![]).unwrap();
        assert_eq!(item_types(&empty).len(), 0);
        let zero = Instance::zeros(2, Instance::default_item_names(3)).unwrap();
        assert_eq!(distinct_value_count(&zero), 1);
        assert_eq!(item_types(&zero).multiplicities(), vec![3]);
    }

    #[test]
    fn chore_classification_clauses() {
        // Agent 0 on item 0: own 0, agent 1 gives 1, agent 2 gives -1.
        let mut inst = Instance::zeros(3, Instance::default_item_names(2)).unwrap();
        inst.set(0, 1, 0, v(1));
        inst.set(0, 2, 0, v(-1));
        // Agent 0 on item 1: own 5, everyone else 5.
        for j in 0..3 {
            inst.set(0, j, 1, v(5));
        }
        // Agent 1 on item 0: strictly prefers agent 2 to hold it, indifferent to agent 0.
        inst.set(1, 2, 0, v(3));
        let kinds = classify_chores(&inst);
        assert_eq!(kinds[0][0], ChoreKind::Weak);
        assert_eq!(kinds[0][1], ChoreKind::None);
        assert_eq!(kinds[1][0], ChoreKind::Strong);
        let single = Instance::from_fn(1, Instance::default_item_names(2), |_, _, _| v(-3)).unwrap();
        assert!(classify_chores(&single).iter().flatten().all(|&k| k == ChoreKind::None));
    }

    #[test]
    fn normalize_zeroes_each_minimum_and_keeps_nonnegative_instances() {
        let inst = ex1();
        assert_eq!(normalize(&inst), inst);
        let mut neg = ex1();
        neg.set(0, 1, 0, v(-7));
        let norm = normalize(&neg);
        for i in 0..2 {
            for a in 0..2 {
                let col: Vec<_> = (0..2).map(|j| norm.value(i, j, a).clone()).collect();
                assert!(col.iter().all(|x| !x.is_negative()));
                assert!(col.iter().any(Value::is_zero));
            }
        }
        assert_eq!(norm.value(0, 0, 0), &v(9));
    }

    #[test]
    fn allocation_construction_guards() {
        assert!(matches!(Allocation::new(2, vec![0, 2]), Err(Error::UnknownAgent { .. })));
        assert!(Allocation::from_bundles(2, &[vec![0], vec![0, 1]]).is_err());
        assert!(Allocation::from_bundles(3, &[vec![0], vec![1]]).is_err());
        let pi = Allocation::from_bundles(3, &[vec![2], vec![], vec![0, 1]]).unwrap();
        assert_eq!(pi.bundle_sizes(), vec![1, 0, 2]);
        assert_eq!(pi.swapped(0, 2).bundles(), vec![vec![0, 1], vec![], vec![2]]);
        assert!(Instance::from_fn(2, vec!["x".into(), "x".into()], |_, _, _| v(0)).is_err());
        assert!(matches!(Instance::zeros(0, vec![]), Err(Error::NoAgents)));
    }
}
