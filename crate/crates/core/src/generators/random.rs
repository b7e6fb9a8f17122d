//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::value::Value;

/// Where tensor entries are drawn from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueDomain {
    /// Every entry from the same set.
    Uniform(Vec<Value>),
    /// Agent `i`'s entries `V_i(·,·)` from the `i`-th set.
    PerAgent(Vec<Vec<Value>>),
}

impl ValueDomain {
    pub fn integers(values: impl IntoIterator<Item = i64>) -> Self {
        ValueDomain::Uniform(values.into_iter().map(Value::from).collect())
    }

    pub fn binary() -> Self {
        Self::integers([0, 1])
    }

    fn for_agent(&self, i: usize) -> &[Value] {
        match self {
            ValueDomain::Uniform(v) => v,
            ValueDomain::PerAgent(v) => &v[i],
        }
    }
}

/// `n` agents, `m` items named `a1..am`; entries drawn uniformly, in tensor
/// order, from a ChaCha8 stream seeded with `seed`.
pub fn random_instance(n: usize, m: usize, domain: &ValueDomain, seed: u64) -> Result<Instance> {
    if let ValueDomain::PerAgent(sets) = domain {
        if sets.len() != n {
            return Err(Error::AgentCountMismatch { expected: n, found: sets.len() });
        }
    }
    if (0..n).any(|i| domain.for_agent(i).is_empty()) && m > 0 {
        return Err(Error::Precondition("value domain is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Instance::from_fn(n, Instance::default_item_names(m), |i, _, _| {
        let d = domain.for_agent(i);
        d[rng.random_range(0..d.len())].clone()
    })
}
