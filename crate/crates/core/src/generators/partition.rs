//! Three agents, EFX, from Equal-Cardinality-Partition.
//!
//! For `S = (s_1, ..., s_2n)` let `M = (s_max − s_min) n²`,
//! `s'_j = M + s_j − s_min` and `B = ½ Σ (s_j − s_min)`. Items `a_1..a_2n`
//! carry `s'_j` for whichever agent holds them; two auxiliary items make
//! agents 1 and 2 envy agent 3 by exactly one unless they split the numbers
//! evenly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSeed {
    pub values: Vec<i64>,
}

/// Derived constants of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionConstants {
    /// Half the sequence length.
    pub n: usize,
    pub m: Value,
    pub shifted: Vec<Value>,
    pub b: Value,
    /// `Mn + B`, the sum each half must reach.
    pub target: Value,
}

impl PartitionSeed {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if !values.len().is_multiple_of(2) {
            return Err(Error::InvalidSeed(format!("sequence length {} is odd", values.len())));
        }
        Ok(PartitionSeed { values })
    }

    pub fn half(&self) -> usize {
        self.values.len() / 2
    }

    pub fn constants(&self) -> Result<PartitionConstants> {
        let n = self.half();
        let (Some(&lo), Some(&hi)) = (self.values.iter().min(), self.values.iter().max()) else {
            return Err(Error::InvalidSeed("empty sequence".into()));
        };
        let m = Value::from(hi - lo) * Value::from(n * n);
        if m.is_zero() {
            return Err(Error::InvalidSeed(
                "all numbers are equal, so every subset of half the size is a solution".into(),
            ));
        }
        let shifted: Vec<Value> = self.values.iter().map(|&s| &m + Value::from(s - lo)).collect();
        let b = self.values.iter().map(|&s| Value::from(s - lo)).sum::<Value>() / Value::from(2);
        let target = &m * Value::from(n) + &b;
        Ok(PartitionConstants { n, m, shifted, b, target })
    }

    /// Whether `subset` (0-based positions) has half the elements and half the
    /// sum.
    pub fn is_equal_split(&self, subset: &[usize]) -> bool {
        let mut seen = vec![false; self.values.len()];
        for &k in subset {
            if k >= seen.len() || seen[k] {
                return false;
            }
            seen[k] = true;
        }
        let inside: i128 = subset.iter().map(|&k| self.values[k] as i128).sum();
        let total: i128 = self.values.iter().map(|&s| s as i128).sum();
        subset.len() == self.half() && 2 * inside == total
    }

    /// First equal split in lexicographic order of subsets, by exhaustion.
    pub fn find_equal_split(&self) -> Option<Vec<usize>> {
        let len = self.values.len();
        assert!(len < 32, "exhaustive split search is for small sequences");
        (0u32..1 << len)
            .filter(|mask| mask.count_ones() as usize == self.half())
            .map(|mask| (0..len).filter(|&k| mask >> k & 1 == 1).collect::<Vec<_>>())
            .find(|subset| self.is_equal_split(subset))
    }
}

pub fn partition_to_efx_instance(seed: &PartitionSeed) -> Result<Instance> {
    let c = seed.constants()?;
    let two_n = seed.values.len();
    let (x, y) = (two_n, two_n + 1);
    let items = Instance::default_item_names(two_n + 2);
    let mut inst = Instance::zeros(3, items)?;
    for agent in 0..3 {
        for (j, s) in c.shifted.iter().enumerate() {
            inst.set(agent, agent, j, s.clone());
        }
    }
    let neg = -(&c.m * &c.m);
    inst.set(0, 0, x, c.target.clone());
    inst.set(1, 1, y, c.target.clone());
    inst.set(0, 0, y, Value::one());
    inst.set(1, 1, x, Value::one());
    inst.set(0, 1, y, neg.clone());
    inst.set(1, 0, x, neg);
    let half = &c.target / Value::from(2);
    inst.set(2, 2, x, half.clone());
    inst.set(2, 2, y, half);
    Ok(inst)
}

/// `subset` to agent 1, the rest of the numbers to agent 2, both auxiliary
/// items to agent 3.
pub fn partition_witness(seed: &PartitionSeed, subset: &[usize]) -> Result<Allocation> {
    if !seed.is_equal_split(subset) {
        return Err(Error::InvalidCertificate(format!(
            "{:?} is not an equal-cardinality equal-sum split",
            subset.iter().map(|k| k + 1).collect::<Vec<_>>()
        )));
    }
    let two_n = seed.values.len();
    let mut owner = vec![1usize; two_n + 2];
    for &k in subset {
        owner[k] = 0;
    }
    owner[two_n] = 2;
    owner[two_n + 1] = 2;
    Allocation::new(3, owner)
}
