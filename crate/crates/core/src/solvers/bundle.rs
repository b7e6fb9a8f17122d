//! Existence via bundle types.
//!
//! Guess, for every agent, which item types appear in its bundle. Under a
//! fixed guess the removal effect of any item depends only on its type and on
//! which of the two bundles of a pair holds it, so the EF1/EFX slack of every
//! pair is a constant and fairness becomes a set of linear constraints on the
//! type counts `x_{t,i}`. Each guess is then decided by
//! [`solve_integer_feasibility`].

use crate::error::{Error, Result};
use crate::fairness::{self, FairnessNotion};
use crate::model::{item_types, own_minus_other, Allocation, Instance, ItemTypePartition};
use crate::value::Value;

use super::feasibility::{solve_integer_feasibility, IntegerFeasibilityProblem, LinearConstraint};
use super::{Engine, SolveResult, SolveStats};

/// For every agent, the set of item types present in its bundle (bit `t`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundleTypeGuess {
    pub masks: Vec<u64>,
}

impl BundleTypeGuess {
    pub fn contains(&self, agent: usize, t: usize) -> bool {
        self.masks[agent] >> t & 1 == 1
    }

    /// The guess an allocation realizes.
    pub fn of_allocation(alloc: &Allocation, part: &ItemTypePartition) -> Self {
        let mut masks = vec![0u64; alloc.agents()];
        for (a, &o) in alloc.owners().iter().enumerate() {
            masks[o] |= 1 << part.type_of[a];
        }
        BundleTypeGuess { masks }
    }

    /// Necessary conditions: every type is used, no type by more agents than
    /// it has items.
    pub fn is_consistent(&self, part: &ItemTypePartition) -> bool {
        (0..part.len()).all(|t| {
            let users = self.masks.iter().filter(|&&m| m >> t & 1 == 1).count();
            users >= 1 && users <= part.types[t].multiplicity()
        }) && self.masks.iter().all(|&m| part.len() >= 64 || m >> part.len() == 0)
    }
}

/// Type count vector `x_{t,i}` (laid out `t * n + i`) of an allocation.
pub fn count_vector(alloc: &Allocation, part: &ItemTypePartition) -> Vec<u64> {
    let n = alloc.agents();
    let mut x = vec![0u64; part.len() * n];
    for (a, &o) in alloc.owners().iter().enumerate() {
        x[part.type_of[a] * n + o] += 1;
    }
    x
}

/// Per-type `V_i(i,t) − V_i(j,t)` for every ordered pair, `[i][j][t]`.
fn type_differences(inst: &Instance, part: &ItemTypePartition) -> Vec<Vec<Vec<Value>>> {
    let n = inst.agents();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..part.len())
                        .map(|t| own_minus_other(inst, i, j, part.representative(t)))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Removal effects available to pair `(i, j)` under a guess: `d_t` for types
/// in `B(j)`, `−d_t` for types in `B(i)`, plus `0` when a third bundle holds
/// something.
fn available_deltas(diff: &[Value], mask_i: u64, mask_j: u64, third_nonempty: bool) -> Vec<Value> {
    let mut out = Vec::new();
    for (t, d) in diff.iter().enumerate() {
        if mask_j >> t & 1 == 1 {
            out.push(d.clone());
        }
        if mask_i >> t & 1 == 1 {
            out.push(-d);
        }
    }
    if third_nonempty {
        out.push(Value::zero());
    }
    out
}

/// Right-hand side of pair `(i, j)`'s constraint `gap ≤ slack`; `None` means
/// the pair imposes no constraint.
fn slack(notion: FairnessNotion, available: &[Value]) -> Result<Option<Value>> {
    Ok(match notion {
        FairnessNotion::Ef => Some(Value::zero()),
        // With no item anywhere the gap is identically zero.
        FairnessNotion::Ef1 => Some(available.iter().max().cloned().unwrap_or_else(Value::zero)),
        FairnessNotion::Efx => available.iter().filter(|d| d.is_positive()).min().cloned(),
        FairnessNotion::Ef2 => {
            return Err(Error::Unsupported("EF2 in the bundle-type engine".into()));
        }
    })
}

/// The EF1/EFX slack of pair `(i, j)` under `guess`, as used in the program.
pub fn pair_slack(
    inst: &Instance,
    part: &ItemTypePartition,
    guess: &BundleTypeGuess,
    notion: FairnessNotion,
    i: usize,
    j: usize,
) -> Result<Option<Value>> {
    let diff: Vec<Value> =
        (0..part.len()).map(|t| own_minus_other(inst, i, j, part.representative(t))).collect();
    let third = (0..inst.agents()).any(|k| k != i && k != j && guess.masks[k] != 0);
    slack(notion, &available_deltas(&diff, guess.masks[i], guess.masks[j], third))
}

/// The integer program whose feasible points are exactly the count vectors of
/// `notion`-fair allocations realizing `guess`.
pub fn build_problem(
    inst: &Instance,
    part: &ItemTypePartition,
    guess: &BundleTypeGuess,
    notion: FairnessNotion,
) -> Result<IntegerFeasibilityProblem> {
    let diffs = type_differences(inst, part);
    build_with(inst.agents(), part, &diffs, guess, notion)
}

fn build_with(
    n: usize,
    part: &ItemTypePartition,
    diffs: &[Vec<Vec<Value>>],
    guess: &BundleTypeGuess,
    notion: FairnessNotion,
) -> Result<IntegerFeasibilityProblem> {
    let tau = part.len();
    let type_counts: Vec<u64> = part.multiplicities().into_iter().map(|c| c as u64).collect();
    let mut lower = Vec::with_capacity(tau * n);
    let mut upper = Vec::with_capacity(tau * n);
    for t in 0..tau {
        for i in 0..n {
            if guess.contains(i, t) {
                lower.push(1);
                upper.push(type_counts[t]);
            } else {
                lower.push(0);
                upper.push(0);
            }
        }
    }
    let mut constraints = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let third = (0..n).any(|k| k != i && k != j && guess.masks[k] != 0);
            let diff = &diffs[i][j];
            let available = available_deltas(diff, guess.masks[i], guess.masks[j], third);
            let Some(rhs) = slack(notion, &available)? else {
                continue;
            };
            // gap = Σ_t d_t · (x_{t,j} − x_{t,i})
            let mut terms = Vec::new();
            for (t, d) in diff.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                if guess.contains(j, t) {
                    terms.push((t * n + j, d.clone()));
                }
                if guess.contains(i, t) {
                    terms.push((t * n + i, -d));
                }
            }
            constraints.push(LinearConstraint { terms, rhs, pair: Some((i, j)) });
        }
    }
    Ok(IntegerFeasibilityProblem { types: tau, agents: n, type_counts, lower, upper, constraints })
}

/// Turn a feasible point into an allocation: within each type, members go to
/// agents in index order according to the counts.
pub fn expand_point(part: &ItemTypePartition, agents: usize, x: &[u64]) -> Result<Allocation> {
    let m = part.type_of.len();
    let mut owner = vec![0usize; m];
    for (t, ty) in part.types.iter().enumerate() {
        let mut members = ty.members.iter();
        for i in 0..agents {
            for _ in 0..x[t * agents + i] {
                let a = members
                    .next()
                    .ok_or_else(|| Error::Precondition(format!("type {t} over-allocated")))?;
                owner[*a] = i;
            }
        }
        if members.next().is_some() {
            return Err(Error::Precondition(format!("type {t} under-allocated")));
        }
    }
    Allocation::new(agents, owner)
}

/// Type subsets ordered by popcount, then by mask value.
fn subset_order(tau: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << tau).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// `(2^τ)^n` as a guess-space size, `None` past `u128`.
pub fn guess_space(types: usize, agents: usize) -> Option<u128> {
    let bits = types.checked_mul(agents)?;
    (bits < 128).then(|| 1u128 << bits)
}

pub fn bundle_type_solve(inst: &Instance, notion: FairnessNotion, budget: u64) -> Result<SolveResult> {
    if notion == FairnessNotion::Ef2 {
        return Err(Error::Unsupported("EF2 in the bundle-type engine".into()));
    }
    let part = item_types(inst);
    crate::enumerate::check_budget(guess_space(part.len(), inst.agents()), budget)?;
    let mut search = GuessSearch::new(inst, &part, notion);
    let witness = search.dfs(0)?;
    if let Some(alloc) = &witness {
        assert!(
            fairness::is_fair(inst, alloc.owners(), notion),
            "bundle-type witness rejected by the {notion} checker"
        );
    }
    Ok(SolveResult { engine: Engine::BundleType, notion, witness, stats: search.stats })
}

struct GuessSearch<'a> {
    part: &'a ItemTypePartition,
    notion: FairnessNotion,
    n: usize,
    counts: Vec<u64>,
    diffs: Vec<Vec<Vec<Value>>>,
    order: Vec<u64>,
    guess: BundleTypeGuess,
    usage: Vec<u64>,
    stats: SolveStats,
}

impl<'a> GuessSearch<'a> {
    fn new(inst: &Instance, part: &'a ItemTypePartition, notion: FairnessNotion) -> Self {
        let n = inst.agents();
        GuessSearch {
            part,
            notion,
            n,
            counts: part.multiplicities().into_iter().map(|c| c as u64).collect(),
            diffs: type_differences(inst, part),
            order: subset_order(part.len()),
            guess: BundleTypeGuess { masks: vec![0; n] },
            usage: vec![0; part.len()],
            stats: SolveStats::default(),
        }
    }

    fn dfs(&mut self, agent: usize) -> Result<Option<Allocation>> {
        let tau = self.part.len();
        if agent == self.n {
            if self.usage.contains(&0) {
                return Ok(None);
            }
            self.stats.guesses_explored += 1;
            let prob = build_with(self.n, self.part, &self.diffs, &self.guess, self.notion)?;
            let out = solve_integer_feasibility(&prob);
            self.stats.feasibility_nodes += out.nodes;
            return match out.point {
                Some(x) => Ok(Some(expand_point(self.part, self.n, &x)?)),
                None => Ok(None),
            };
        }
        let remaining_after = self.n - agent - 1;
        for idx in 0..self.order.len() {
            let mask = self.order[idx];
            if (0..tau).any(|t| mask >> t & 1 == 1 && self.usage[t] + 1 > self.counts[t]) {
                continue;
            }
            let uncovered = (0..tau).any(|t| self.usage[t] == 0 && mask >> t & 1 == 0);
            if uncovered && remaining_after == 0 {
                continue;
            }
            self.set_mask(agent, mask);
            let promising = (0..agent).all(|k| self.pair_may_hold(agent, k) && self.pair_may_hold(k, agent));
            if promising {
                if let Some(found) = self.dfs(agent + 1)? {
                    return Ok(Some(found));
                }
            }
            self.set_mask(agent, 0);
        }
        Ok(None)
    }

    fn set_mask(&mut self, agent: usize, mask: u64) {
        let old = self.guess.masks[agent];
        for t in 0..self.part.len() {
            if old >> t & 1 == 1 {
                self.usage[t] -= 1;
            }
            if mask >> t & 1 == 1 {
                self.usage[t] += 1;
            }
        }
        self.guess.masks[agent] = mask;
    }

    /// Relaxation of one pair constraint over the boxes implied by the
    /// partial guess. Sound: returns `false` only if no completion can satisfy
    /// the pair.
    fn pair_may_hold(&self, i: usize, j: usize) -> bool {
        let (mi, mj) = (self.guess.masks[i], self.guess.masks[j]);
        let assigned = i.max(j) + 1;
        let third_possible = assigned < self.n
            || (0..assigned).any(|k| k != i && k != j && self.guess.masks[k] != 0);
        let diff = &self.diffs[i][j];
        let available = available_deltas(diff, mi, mj, third_possible);
        let Ok(Some(rhs)) = slack(self.notion, &available) else {
            return true;
        };
        let mut min_gap = Value::zero();
        for (t, d) in diff.iter().enumerate() {
            let hi = Value::from(self.counts[t] + 1 - self.usage[t].max(1));
            if mj >> t & 1 == 1 {
                min_gap += if d.is_negative() { d * &hi } else { d.clone() };
            }
            if mi >> t & 1 == 1 {
                let nd = -d;
                min_gap += if nd.is_negative() { &nd * &hi } else { nd };
            }
        }
        min_gap <= rhs
    }
}
