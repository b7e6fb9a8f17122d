//! Transformations that preserve fairness verdicts.
//!
//! * two-valued instances map onto binary ones with every gap scaled by a
//!   positive per-agent factor;
//! * agent-item-correlated valuations `V_i(j,a) = (1 − τ_{i,j} μ_{i,a}) v_{i,a}`
//!   collapse to plain utilities `U_i(a) = μ_{i,a} v_{i,a}`, with every gap
//!   scaled by `τ_{i,j}`;
//! * team- and network-based valuations are correlated specs with particular
//!   `τ` and `μ`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::value::Value;

/// The (at most two) values an agent uses, `low < high`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueLevels {
    pub low: Value,
    pub high: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryImage {
    pub instance: Instance,
    pub levels: Vec<ValueLevels>,
}

/// Replace each agent's lower value by 0 and its higher value by 1.
///
/// Gaps scale by `high − low` for every agent, so every verdict is preserved.
pub fn two_valued_to_binary(inst: &Instance) -> Result<BinaryImage> {
    let (n, m) = (inst.agents(), inst.item_count());
    let mut levels = Vec::with_capacity(n);
    for i in 0..n {
        let mut seen = BTreeSet::new();
        for j in 0..n {
            for a in 0..m {
                seen.insert(inst.value(i, j, a).clone());
            }
        }
        if seen.len() > 2 {
            return Err(Error::TooManyValues { agent: i, count: seen.len() });
        }
        let mut it = seen.into_iter();
        let low = it.next().unwrap_or_else(Value::zero);
        levels.push(ValueLevels { low, high: it.next() });
    }
    let instance = Instance::from_fn(n, inst.items().to_vec(), |i, j, a| {
        if *inst.value(i, j, a) == levels[i].low {
            Value::zero()
        } else {
            Value::one()
        }
    })?;
    Ok(BinaryImage { instance, levels })
}

/// A no-externality instance: agent `i` gets `U_i(a)` from holding `a` and
/// nothing from items held by others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlainInstance {
    pub agents: usize,
    pub items: Vec<String>,
    /// `U_i(a)` at `i * m + a`.
    pub utilities: Vec<Value>,
}

impl PlainInstance {
    pub fn from_fn<F>(agents: usize, items: Vec<String>, mut u: F) -> Self
    where
        F: FnMut(usize, usize) -> Value,
    {
        let m = items.len();
        let utilities = (0..agents * m).map(|k| u(k / m.max(1), k % m.max(1))).collect();
        PlainInstance { agents, items, utilities }
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn utility(&self, i: usize, a: usize) -> &Value {
        &self.utilities[i * self.items.len() + a]
    }

    /// `V_i(i,a) = U_i(a)`, every other entry zero.
    pub fn embed(&self) -> Result<Instance> {
        Instance::from_fn(self.agents, self.items.clone(), |i, j, a| {
            if i == j {
                self.utility(i, a).clone()
            } else {
                Value::zero()
            }
        })
    }

    /// `U_i` of a bundle.
    pub fn bundle_value(&self, i: usize, bundle: &[usize]) -> Value {
        bundle.iter().map(|&a| self.utility(i, a)).sum()
    }
}

/// Agent-item-correlated valuations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatedSpec {
    pub agents: usize,
    pub items: Vec<String>,
    /// `v_{i,a}` at `i * m + a`.
    pub base: Vec<Value>,
    /// `τ_{i,j}` at `i * n + j`; the diagonal is ignored.
    pub tau: Vec<Value>,
    /// `μ_{i,a}` at `i * m + a`.
    pub mu: Vec<Value>,
}

impl CorrelatedSpec {
    pub fn base(&self, i: usize, a: usize) -> &Value {
        &self.base[i * self.items.len() + a]
    }

    pub fn tau(&self, i: usize, j: usize) -> &Value {
        &self.tau[i * self.agents + j]
    }

    pub fn mu(&self, i: usize, a: usize) -> &Value {
        &self.mu[i * self.items.len() + a]
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.agents, self.items.len());
        if n == 0 {
            return Err(Error::NoAgents);
        }
        for (found, expected) in [(self.base.len(), n * m), (self.tau.len(), n * n), (self.mu.len(), n * m)] {
            if found != expected {
                return Err(Error::TensorShape { expected, found });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.tau(i, j).is_positive() {
                    return Err(Error::NonPositiveTau { i, j, value: self.tau(i, j).to_string() });
                }
            }
        }
        Ok(())
    }
}

/// `U_i(a) = μ_{i,a} · v_{i,a}`.
pub fn correlated_to_plain(spec: &CorrelatedSpec) -> Result<PlainInstance> {
    spec.validate()?;
    Ok(PlainInstance::from_fn(spec.agents, spec.items.clone(), |i, a| spec.mu(i, a) * spec.base(i, a)))
}

/// The full externality tensor of a correlated spec.
pub fn expand_correlated(spec: &CorrelatedSpec) -> Result<Instance> {
    spec.validate()?;
    Instance::from_fn(spec.agents, spec.items.clone(), |i, j, a| {
        let v = spec.base(i, a);
        if i == j {
            v.clone()
        } else {
            (Value::one() - spec.tau(i, j) * spec.mu(i, a)) * v
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamSpec {
    pub teams: Vec<Vec<usize>>,
    /// Share of a good's value an agent keeps when a teammate receives it.
    pub c: Value,
    pub items: Vec<String>,
    /// `v_{i,a}` at `i * m + a`.
    pub base: Vec<Value>,
}

/// Team valuations: `τ = 1 − c` within a team, `1` across teams, `μ = 1`.
pub fn build_team_based(spec: &TeamSpec) -> Result<CorrelatedSpec> {
    let n: usize = spec.teams.iter().map(Vec::len).sum();
    let mut team_of = vec![usize::MAX; n];
    for (t, members) in spec.teams.iter().enumerate() {
        for &i in members {
            if i >= n {
                return Err(Error::UnknownAgent { agent: i, agents: n });
            }
            if team_of[i] != usize::MAX {
                return Err(Error::Precondition(format!("agent {} is in two teams", i + 1)));
            }
            team_of[i] = t;
        }
    }
    if spec.c.is_negative() || spec.c >= Value::one() {
        return Err(Error::Precondition(format!("team share c = {} must lie in [0, 1)", spec.c)));
    }
    let inside = Value::one() - &spec.c;
    let tau = (0..n * n)
        .map(|k| if team_of[k / n] == team_of[k % n] { inside.clone() } else { Value::one() })
        .collect();
    let out = CorrelatedSpec {
        agents: n,
        items: spec.items.clone(),
        base: spec.base.clone(),
        tau,
        mu: vec![Value::one(); n * spec.items.len()],
    };
    out.validate()?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub agents: usize,
    /// Undirected edges between agents.
    pub edges: Vec<(usize, usize)>,
    pub items: Vec<String>,
    pub base: Vec<Value>,
    pub mu: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkBuild {
    pub spec: CorrelatedSpec,
    /// Hop distances, `[i][j]`.
    pub distances: Vec<Vec<u64>>,
    /// Entries where `d_{i,j} μ_{i,a} > 1`, i.e. a holder far away makes the
    /// item worth a negative multiple of `v_{i,a}`.
    pub warnings: Vec<String>,
}

/// All-pairs hop distances by breadth-first search.
pub fn hop_distances(agents: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<u64>>> {
    let mut adj = vec![Vec::new(); agents];
    for &(u, v) in edges {
        for x in [u, v] {
            if x >= agents {
                return Err(Error::UnknownAgent { agent: x, agents });
            }
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut out = Vec::with_capacity(agents);
    for s in 0..agents {
        let mut dist = vec![u64::MAX; agents];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == u64::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if let Some(t) = dist.iter().position(|&d| d == u64::MAX) {
            return Err(Error::Disconnected(s, t));
        }
        out.push(dist);
    }
    Ok(out)
}

/// Network valuations: `τ_{i,j} = d_{i,j}`.
pub fn build_network_based(spec: &NetworkSpec) -> Result<NetworkBuild> {
    let n = spec.agents;
    let m = spec.items.len();
    let distances = hop_distances(n, &spec.edges)?;
    let tau = (0..n * n).map(|k| Value::from(distances[k / n][k % n])).collect();
    let out = CorrelatedSpec { agents: n, items: spec.items.clone(), base: spec.base.clone(), tau, mu: spec.mu.clone() };
    out.validate()?;
    let mut warnings = Vec::new();
    for i in 0..n {
        for a in 0..m {
            let far = (0..n).filter(|&j| Value::from(distances[i][j]) * out.mu(i, a) > Value::one()).count();
            if far > 0 {
                warnings.push(format!(
                    "agent {} item {}: d·μ exceeds 1 for {far} holder(s), externality changes sign",
                    i + 1,
                    spec.items[a]
                ));
            }
        }
    }
    Ok(NetworkBuild { spec: out, distances, warnings })
}

/// Round-robin picking: agents take turns in index order, each taking its
/// most valued remaining item (lowest index on ties). EF1 when all utilities
/// are nonnegative.
pub fn round_robin_ef1(plain: &PlainInstance) -> Result<Allocation> {
    let (n, m) = (plain.agents, plain.item_count());
    for i in 0..n {
        for a in 0..m {
            if plain.utility(i, a).is_negative() {
                return Err(Error::NegativeUtility { agent: i, utility: plain.utility(i, a).to_string() });
            }
        }
    }
    let mut owner = vec![usize::MAX; m];
    for turn in 0..m {
        let i = turn % n;
        let mut best: Option<usize> = None;
        for a in (0..m).filter(|&a| owner[a] == usize::MAX) {
            if best.is_none_or(|b| plain.utility(i, a) > plain.utility(i, b)) {
                best = Some(a);
            }
        }
        owner[best.expect("an item remains")] = i;
    }
    Allocation::new(n, owner)
}
