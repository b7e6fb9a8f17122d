//! Deciding whether a fair allocation exists.
//!
//! Three engines: exhaustive enumeration ([`brute_force_solve`]), the
//! bundle-type search over small integer programs ([`bundle_type_solve`]), and
//! the one-item-per-agent construction for EF2 when agents outnumber items
//! ([`ef2_trivial`]). [`solve`] picks one under a budget.

pub mod bundle;
pub mod feasibility;

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::enumerate::{allocation_count, for_each_owner_vector};
use crate::error::{Error, Result};
use crate::fairness::{self, FairnessNotion};
use crate::model::{item_types, Allocation, Instance};

pub use bundle::{bundle_type_solve, BundleTypeGuess};
pub use feasibility::{solve_integer_feasibility, FeasibilityOutcome, IntegerFeasibilityProblem, LinearConstraint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Auto,
    Brute,
    BundleType,
    Ef2Trivial,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Brute => "brute",
            Engine::BundleType => "bundle-type",
            Engine::Ef2Trivial => "ef2-trivial",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Engine::Auto),
            "brute" | "brute-force" => Ok(Engine::Brute),
            "bundle-type" | "bundle" => Ok(Engine::BundleType),
            "ef2-trivial" => Ok(Engine::Ef2Trivial),
            other => Err(Error::Unsupported(format!("engine `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub allocations_checked: u64,
    pub guesses_explored: u64,
    pub feasibility_nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub notion: FairnessNotion,
    /// The engine that produced the decision.
    pub engine: Engine,
    pub witness: Option<Allocation>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }
}

/// Try every allocation in lexicographic order of the owner vector and return
/// the first fair one.
pub fn brute_force_solve(inst: &Instance, notion: FairnessNotion, budget: u64) -> Result<SolveResult> {
    let mut checked = 0u64;
    let found = for_each_owner_vector(inst.agents(), inst.item_count(), budget, |owner| {
        checked += 1;
        if fairness::is_fair(inst, owner, notion) {
            ControlFlow::Break(owner.to_vec())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let witness = found.map(|owner| Allocation::new(inst.agents(), owner)).transpose()?;
    Ok(SolveResult {
        notion,
        engine: Engine::Brute,
        witness,
        stats: SolveStats { allocations_checked: checked, ..SolveStats::default() },
    })
}

/// Item `k` to agent `k`. Needs more agents than items; every bundle then has
/// at most one item, so removing both items of a pair clears any envy.
pub fn ef2_trivial(inst: &Instance) -> Result<SolveResult> {
    let (n, m) = (inst.agents(), inst.item_count());
    if n <= m {
        return Err(Error::Precondition(format!(
            "one item per agent needs more agents than items ({n} agents, {m} items)"
        )));
    }
    let alloc = Allocation::new(n, (0..m).collect())?;
    assert!(fairness::is_fair(inst, alloc.owners(), FairnessNotion::Ef2));
    Ok(SolveResult {
        notion: FairnessNotion::Ef2,
        engine: Engine::Ef2Trivial,
        witness: Some(alloc),
        stats: SolveStats { allocations_checked: 1, ..SolveStats::default() },
    })
}

/// Run `engine`, or with [`Engine::Auto`] the cheapest engine that fits the
/// budget: bundle types when `(2^τ)^n ≤ budget`, otherwise enumeration when
/// `n^m ≤ budget`.
pub fn solve(inst: &Instance, notion: FairnessNotion, engine: Engine, budget: u64) -> Result<SolveResult> {
    match engine {
        Engine::Brute => brute_force_solve(inst, notion, budget),
        Engine::BundleType => bundle_type_solve(inst, notion, budget),
        Engine::Ef2Trivial => ef2_trivial(inst),
        Engine::Auto if notion == FairnessNotion::Ef2 => {
            if inst.agents() > inst.item_count() {
                ef2_trivial(inst)
            } else {
                brute_force_solve(inst, notion, budget)
            }
        }
        Engine::Auto => {
            let guesses = bundle::guess_space(item_types(inst).len(), inst.agents());
            if guesses.is_some_and(|g| g <= budget as u128) {
                bundle_type_solve(inst, notion, budget)
            } else if allocation_count(inst.agents(), inst.item_count()).is_some_and(|c| c <= budget as u128) {
                brute_force_solve(inst, notion, budget)
            } else {
                Err(Error::BudgetExceeded {
                    required: format!(
                        "{} guesses or {} allocations",
                        guesses.map_or("more than 2^128".into(), |g| g.to_string()),
                        allocation_count(inst.agents(), inst.item_count())
                            .map_or("more than 2^128".into(), |c| c.to_string())
                    ),
                    budget,
                })
            }
        }
    }
}
