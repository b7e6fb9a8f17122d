//! EFX with six values and three item types, from Min Bisection on cubic
//! graphs.
//!
//! A cubic graph on `2n` vertices has `3n` edges; every edge becomes an agent.
//! Items come in three types `X`, `Y`, `Z` of sizes `(3n+k)/2`, `(3n−k)/2` and
//! `3n−k`. An agent values its own `X`/`Y` items at `10n²`/`5n²`, and the same
//! items held by an agent whose edge is disjoint from its own at `4n` less;
//! `Z` items are worth `1` to their holder only.

use serde::{Deserialize, Serialize};

use super::graphs::Graph;
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicGraphSeed {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Cut budget.
    pub k: usize,
}

/// Item counts of the three types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BisectionSizes {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl CubicGraphSeed {
    pub fn new(graph: &Graph, k: usize) -> Result<Self> {
        let seed = CubicGraphSeed { vertices: graph.vertices, edges: graph.edges.clone(), k };
        seed.validate()?;
        Ok(seed)
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.vertices, self.edges.clone())
    }

    /// Half the number of vertices.
    pub fn half(&self) -> usize {
        self.vertices / 2
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.graph()?;
        if self.vertices == 0 || !g.is_cubic() {
            return Err(Error::InvalidSeed("graph is not cubic".into()));
        }
        let three_n = 3 * self.half();
        if !(three_n + self.k).is_multiple_of(2) {
            return Err(Error::InvalidSeed(format!("3n + k = {} is odd", three_n + self.k)));
        }
        // With k = 3n the Y and Z items vanish and only one item type is left.
        if self.k >= three_n {
            return Err(Error::InvalidSeed(format!("cut budget {} must be below 3n = {three_n}", self.k)));
        }
        Ok(())
    }

    pub fn sizes(&self) -> BisectionSizes {
        let three_n = 3 * self.half();
        BisectionSizes { x: (three_n + self.k) / 2, y: (three_n - self.k) / 2, z: three_n - self.k }
    }
}

fn share_endpoint(e: (usize, usize), f: (usize, usize)) -> bool {
    e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1
}

pub fn bisection_to_efx_instance(seed: &CubicGraphSeed) -> Result<Instance> {
    seed.validate()?;
    let g = seed.graph()?;
    let n = seed.half() as i64;
    let s = seed.sizes();
    let items: Vec<String> = (1..=s.x)
        .map(|k| format!("x{k}"))
        .chain((1..=s.y).map(|k| format!("y{k}")))
        .chain((1..=s.z).map(|k| format!("z{k}")))
        .collect();
    let (own_x, own_y, drop) = (10 * n * n, 5 * n * n, 4 * n);
    Instance::from_fn(g.edges.len(), items, |i, j, a| {
        let (own, far) = if a < s.x {
            (own_x, own_x - drop)
        } else if a < s.x + s.y {
            (own_y, own_y - drop)
        } else {
            (1, 0)
        };
        if i == j {
            Value::from(own)
        } else if !share_endpoint(g.edges[i], g.edges[j]) {
            Value::from(far)
        } else {
            Value::zero()
        }
    })
}

/// `side[v]` puts vertex `v` in `X'`. Edges inside `X'` get an `X` and a `Z`
/// item, edges inside `Y'` a `Y` and a `Z` item, cut edges one `X` item.
pub fn bisection_witness(seed: &CubicGraphSeed, side: &[bool]) -> Result<Allocation> {
    seed.validate()?;
    let g = seed.graph()?;
    if side.len() != g.vertices {
        return Err(Error::InvalidCertificate(format!(
            "partition covers {} vertices, graph has {}",
            side.len(),
            g.vertices
        )));
    }
    let in_x = side.iter().filter(|&&b| b).count();
    if in_x != seed.half() {
        return Err(Error::InvalidCertificate(format!("unbalanced partition: {in_x} of {} vertices", g.vertices)));
    }
    let cut = g.cut_size(side);
    if cut != seed.k {
        return Err(Error::InvalidCertificate(format!("partition cuts {cut} edges, expected {}", seed.k)));
    }
    let s = seed.sizes();
    let (mut next_x, mut next_y, mut next_z) = (0, s.x, s.x + s.y);
    let mut owner = vec![0usize; s.x + s.y + s.z];
    for (agent, &(u, v)) in g.edges.iter().enumerate() {
        match (side[u], side[v]) {
            (true, true) => {
                owner[next_x] = agent;
                owner[next_z] = agent;
                next_x += 1;
                next_z += 1;
            }
            (false, false) => {
                owner[next_y] = agent;
                owner[next_z] = agent;
                next_y += 1;
                next_z += 1;
            }
            _ => {
                owner[next_x] = agent;
                next_x += 1;
            }
        }
    }
    Allocation::new(g.edges.len(), owner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{is_fair, FairnessNotion};
    use crate::generators::graphs;
    use crate::model::{distinct_value_count, has_weak_chores, item_types};

    #[test]
    fn complete4_sizes_and_statistics() {
        let seed = CubicGraphSeed::new(&graphs::complete4(), 4).unwrap();
        let inst = bisection_to_efx_instance(&seed).unwrap();
        assert_eq!(inst.agents(), 6);
        assert_eq!(seed.sizes(), BisectionSizes { x: 5, y: 1, z: 2 });
        assert_eq!(item_types(&inst).len(), 3);
        assert_eq!(distinct_value_count(&inst), 6);
        assert!(!has_weak_chores(&inst));
    }

    #[test]
    fn witnesses_are_efx() {
        for (g, k) in [(graphs::complete4(), 4), (graphs::prism(), 3)] {
            let seed = CubicGraphSeed::new(&g, k).unwrap();
            let inst = bisection_to_efx_instance(&seed).unwrap();
            for side in g.balanced_bisections().into_iter().filter(|s| g.cut_size(s) == k) {
                let alloc = bisection_witness(&seed, &side).unwrap();
                assert!(is_fair(&inst, alloc.owners(), FairnessNotion::Efx));
            }
        }
    }

    #[test]
    fn invalid_seeds_and_certificates() {
        let g = graphs::prism();
        assert!(CubicGraphSeed::new(&g, 4).is_err());
        assert!(CubicGraphSeed::new(&g, 9).is_err());
        let not_cubic = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(CubicGraphSeed::new(&not_cubic, 2).is_err());
        let seed = CubicGraphSeed::new(&g, 3).unwrap();
        let wrong_cut = vec![true, false, true, false, true, false];
        assert_ne!(g.cut_size(&wrong_cut), 3);
        assert!(matches!(bisection_witness(&seed, &wrong_cut), Err(Error::InvalidCertificate(_))));
        assert!(bisection_witness(&seed, &[true; 6]).is_err());
    }
}
