//! Branch-and-prune search for integer points of the bundle-type programs.
//!
//! Variables `x_{t,i}` count how many items of type `t` agent `i` receives.
//! Each variable has a box `[lo, hi]`, each type has an equality
//! `Σ_i x_{t,i} = n_t`, and pairs contribute linear constraints
//! `Σ c·x ≤ rhs`. The domain is finite, so exhaustive branching with sound
//! pruning is complete.

use crate::value::Value;

/// `Σ coef · x_var ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, Value)>,
    pub rhs: Value,
    /// Ordered agent pair the constraint came from, if any.
    pub pair: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerFeasibilityProblem {
    pub types: usize,
    pub agents: usize,
    /// `n_t` for every type.
    pub type_counts: Vec<u64>,
    /// Box per variable `t * agents + i`.
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
    pub constraints: Vec<LinearConstraint>,
}

impl IntegerFeasibilityProblem {
    pub fn var(&self, t: usize, i: usize) -> usize {
        t * self.agents + i
    }

    pub fn var_count(&self) -> usize {
        self.types * self.agents
    }

    /// Check a candidate point against every constraint.
    pub fn is_feasible_point(&self, x: &[u64]) -> bool {
        if x.len() != self.var_count() {
            return false;
        }
        let boxes = x
            .iter()
            .enumerate()
            .all(|(v, &xv)| self.lower[v] <= xv && xv <= self.upper[v]);
        let sums = (0..self.types).all(|t| {
            (0..self.agents).map(|i| x[self.var(t, i)]).sum::<u64>() == self.type_counts[t]
        });
        boxes
            && sums
            && self.constraints.iter().all(|c| {
                let lhs: Value = c.terms.iter().map(|(v, coef)| coef * Value::from(x[*v])).sum();
                lhs <= c.rhs
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityOutcome {
    pub point: Option<Vec<u64>>,
    pub nodes: u64,
}

/// Find a point satisfying boxes, type equalities and all linear constraints.
///
/// Variables are fixed type by type, agent by agent. At every node each
/// type's residual `n_t − assigned` must fit between the remaining lower and
/// upper bounds, and every constraint's partial sum plus its optimistic
/// completion must not exceed its right-hand side. The optimistic completion
/// of a type is exact for a single constraint: remaining variables sit at
/// their lower bounds and the surplus goes to the cheapest coefficients.
pub fn solve_integer_feasibility(prob: &IntegerFeasibilityProblem) -> FeasibilityOutcome {
    let mut search = Search::new(prob);
    let found = search.run();
    FeasibilityOutcome { point: found.then(|| search.x.clone()), nodes: search.nodes }
}

struct Search<'a> {
    prob: &'a IntegerFeasibilityProblem,
    /// Dense coefficients `[constraint][var]`.
    coef: Vec<Vec<Value>>,
    /// Per constraint and type: variables of that type sorted by coefficient.
    order: Vec<Vec<Vec<usize>>>,
    x: Vec<u64>,
    partial: Vec<Value>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(prob: &'a IntegerFeasibilityProblem) -> Self {
        let vars = prob.var_count();
        let coef: Vec<Vec<Value>> = prob
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![Value::zero(); vars];
                for (v, k) in &c.terms {
                    row[*v] += k;
                }
                row
            })
            .collect();
        let order = coef
            .iter()
            .map(|row| {
                (0..prob.types)
                    .map(|t| {
                        let mut vs: Vec<usize> = (0..prob.agents).map(|i| prob.var(t, i)).collect();
                        vs.sort_by(|&a, &b| row[a].cmp(&row[b]));
                        vs
                    })
                    .collect()
            })
            .collect();
        Search {
            prob,
            coef,
            order,
            x: vec![0; vars],
            partial: vec![Value::zero(); prob.constraints.len()],
            nodes: 0,
        }
    }

    fn run(&mut self) -> bool {
        if self.prob.type_counts.len() != self.prob.types
            || self.prob.lower.len() != self.prob.var_count()
            || self.prob.upper.len() != self.prob.var_count()
        {
            return false;
        }
        if self.prob.lower.iter().zip(&self.prob.upper).any(|(lo, hi)| lo > hi) {
            return false;
        }
        self.branch(0)
    }

    /// Position `pos` in the order `(t, i)` → `t * agents + i`.
    fn branch(&mut self, pos: usize) -> bool {
        self.nodes += 1;
        if !self.prune_ok(pos) {
            return false;
        }
        let prob = self.prob;
        if pos == prob.var_count() {
            return self.partial.iter().zip(&prob.constraints).all(|(p, c)| p <= &c.rhs);
        }
        let (t, i) = (pos / prob.agents, pos % prob.agents);
        let assigned: u64 = (0..i).map(|k| self.x[prob.var(t, k)]).sum();
        let residual = prob.type_counts[t].saturating_sub(assigned);
        let (lo, hi) = (prob.lower[pos], prob.upper[pos].min(residual));
        let range: Vec<u64> = if i + 1 == prob.agents {
            // Last agent of a type takes exactly the residual.
            if residual < lo || residual > prob.upper[pos] {
                return false;
            }
            vec![residual]
        } else {
            (lo..=hi).collect()
        };
        for value in range {
            self.assign(pos, value);
            if self.branch(pos + 1) {
                return true;
            }
            self.assign(pos, 0);
        }
        false
    }

    fn assign(&mut self, var: usize, value: u64) {
        let old = self.x[var];
        if old == value {
            return;
        }
        let diff = Value::from(value) - Value::from(old);
        for (k, row) in self.coef.iter().enumerate() {
            if !row[var].is_zero() {
                self.partial[k] += &row[var] * &diff;
            }
        }
        self.x[var] = value;
    }

    /// Residual feasibility per type and optimistic bound per constraint for
    /// the variables at positions `pos..`.
    fn prune_ok(&self, pos: usize) -> bool {
        let prob = self.prob;
        let mut residual = vec![0u64; prob.types];
        for t in 0..prob.types {
            let (mut fixed, mut lo, mut hi) = (0u64, 0u64, 0u64);
            for i in 0..prob.agents {
                let v = prob.var(t, i);
                if v < pos {
                    fixed += self.x[v];
                } else {
                    lo += prob.lower[v];
                    hi += prob.upper[v];
                }
            }
            if fixed > prob.type_counts[t] {
                return false;
            }
            let r = prob.type_counts[t] - fixed;
            if r < lo || r > hi {
                return false;
            }
            residual[t] = r;
        }
        for (k, c) in prob.constraints.iter().enumerate() {
            let mut bound = self.partial[k].clone();
            for t in 0..prob.types {
                bound += self.cheapest_completion(k, t, pos, residual[t]);
            }
            if bound > c.rhs {
                return false;
            }
        }
        true
    }

    /// Minimum of `Σ coef·x` over the unfixed variables of type `t` whose sum
    /// must equal `residual`.
    fn cheapest_completion(&self, k: usize, t: usize, pos: usize, residual: u64) -> Value {
        let prob = self.prob;
        let row = &self.coef[k];
        let mut total = Value::zero();
        let mut surplus = residual;
        for &v in &self.order[k][t] {
            if v >= pos {
                total += &row[v] * Value::from(prob.lower[v]);
                surplus -= prob.lower[v];
            }
        }
        for &v in &self.order[k][t] {
            if surplus == 0 {
                break;
            }
            if v >= pos {
                let room = (prob.upper[v] - prob.lower[v]).min(surplus);
                total += &row[v] * Value::from(room);
                surplus -= room;
            }
        }
        total
    }
}
