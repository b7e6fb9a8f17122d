//! Envy-freeness with binary goods, from Multicolored Clique.
//!
//! Vertex `u_i^ℓ` (color `i`, position `ℓ`) becomes vertex-agent `w_i^ℓ`,
//! every edge between colors `i < j` an edge-agent in group `F_{i,j}`. There
//! is one selection item `a_i` per color and one incidence item `a_{i,j}` per
//! color pair.
//!
//! Agent order: vertex-agents color by color, then edge-agents group by group
//! (pairs in lexicographic order, edges in seed order). Item order: selection
//! items, then incidence items in lexicographic pair order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::value::Value;

/// A `k`-partite graph with `class_size` vertices per color. Vertex
/// `(i, ℓ)` has global index `i * class_size + ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSeed {
    pub k: usize,
    pub class_size: usize,
    pub edges: Vec<(usize, usize)>,
}

struct Layout {
    /// Edges of each color pair, normalized so the first endpoint has the
    /// smaller color; indexed by pair number.
    groups: Vec<Vec<(usize, usize)>>,
    pairs: Vec<(usize, usize)>,
}

impl CliqueSeed {
    pub fn color(&self, vertex: usize) -> usize {
        vertex / self.class_size
    }

    fn layout(&self) -> Result<Layout> {
        if self.k == 0 || self.class_size == 0 {
            return Err(Error::InvalidSeed("need at least one color and one vertex per color".into()));
        }
        let total = self.k * self.class_size;
        let pairs: Vec<(usize, usize)> =
            (0..self.k).flat_map(|i| (i + 1..self.k).map(move |j| (i, j))).collect();
        let mut groups = vec![Vec::new(); pairs.len()];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            if u >= total || v >= total {
                return Err(Error::InvalidSeed(format!("edge ({}, {}) leaves the vertex range", u + 1, v + 1)));
            }
            let (u, v) = if self.color(u) <= self.color(v) { (u, v) } else { (v, u) };
            let (ci, cj) = (self.color(u), self.color(v));
            if ci == cj {
                return Err(Error::InvalidSeed(format!("edge ({}, {}) joins two vertices of color {}", u + 1, v + 1, ci + 1)));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidSeed(format!("repeated edge ({}, {})", u + 1, v + 1)));
            }
            let p = pairs.iter().position(|&q| q == (ci, cj)).expect("pair exists");
            groups[p].push((u, v));
        }
        if let Some(first) = groups.first() {
            if let Some(g) = groups.iter().position(|g| g.len() != first.len()) {
                let (i, j) = pairs[g];
                return Err(Error::InvalidSeed(format!(
                    "colors {} and {} have {} edges between them, other pairs {}",
                    i + 1,
                    j + 1,
                    groups[g].len(),
                    first.len()
                )));
            }
        }
        Ok(Layout { groups, pairs })
    }

    pub fn agent_count(&self) -> usize {
        self.k * self.class_size + self.edges.len()
    }

    pub fn item_count(&self) -> usize {
        self.k + self.k * (self.k.saturating_sub(1)) / 2
    }
}

pub fn clique_to_ef_instance(seed: &CliqueSeed) -> Result<Instance> {
    let layout = seed.layout()?;
    let k = seed.k;
    let vertex_agents = k * seed.class_size;
    let items: Vec<String> = (1..=k)
        .map(|i| format!("a{i}"))
        .chain(layout.pairs.iter().map(|&(i, j)| format!("a{},{}", i + 1, j + 1)))
        .collect();
    // Edge-agent index -> (pair number, edge).
    let edge_agents: Vec<(usize, (usize, usize))> = layout
        .groups
        .iter()
        .enumerate()
        .flat_map(|(p, g)| g.iter().map(move |&e| (p, e)))
        .collect();
    let n = vertex_agents + edge_agents.len();
    let mut inst = Instance::zeros(n, items)?;
    let one = Value::one();
    for (fi, &(p, _)) in edge_agents.iter().enumerate() {
        let f = vertex_agents + fi;
        let item = k + p;
        for (gi, &(q, _)) in edge_agents.iter().enumerate() {
            if q == p {
                inst.set(f, vertex_agents + gi, item, one.clone());
            }
        }
    }
    for w in 0..vertex_agents {
        let i = seed.color(w);
        for x in (0..seed.class_size).map(|l| i * seed.class_size + l) {
            inst.set(w, x, i, one.clone());
        }
        for (p, &(ci, cj)) in layout.pairs.iter().enumerate() {
            if ci != i && cj != i {
                continue;
            }
            let item = k + p;
            inst.set(w, w, item, one.clone());
            for (fi, &(q, (u, v))) in edge_agents.iter().enumerate() {
                if q == p && u != w && v != w {
                    inst.set(w, vertex_agents + fi, item, one.clone());
                }
            }
        }
    }
    Ok(inst)
}

/// `clique[i]` is the chosen vertex of color `i` (any order accepted).
/// Selection item `a_i` goes to its vertex-agent, incidence item `a_{i,j}` to
/// the edge-agent of the clique edge between colors `i` and `j`.
pub fn clique_witness(seed: &CliqueSeed, clique: &[usize]) -> Result<Allocation> {
    let layout = seed.layout()?;
    let k = seed.k;
    let mut chosen = vec![usize::MAX; k];
    for &v in clique {
        if v >= k * seed.class_size {
            return Err(Error::InvalidCertificate(format!("vertex {} does not exist", v + 1)));
        }
        let c = seed.color(v);
        if chosen[c] != usize::MAX {
            return Err(Error::InvalidCertificate(format!("two vertices of color {}", c + 1)));
        }
        chosen[c] = v;
    }
    if clique.len() != k {
        return Err(Error::InvalidCertificate(format!("{} vertices given, need one per color ({k})", clique.len())));
    }
    let vertex_agents = k * seed.class_size;
    let mut owner: Vec<usize> = chosen.clone();
    let mut offset = vertex_agents;
    for (p, &(i, j)) in layout.pairs.iter().enumerate() {
        let group = &layout.groups[p];
        let at = group.iter().position(|&e| e == (chosen[i], chosen[j])).ok_or_else(|| {
            Error::InvalidCertificate(format!("vertices {} and {} are not adjacent", chosen[i] + 1, chosen[j] + 1))
        })?;
        owner.push(offset + at);
        offset += group.len();
    }
    Allocation::new(seed.agent_count(), owner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{check, FairnessNotion};
    use crate::model::{classify_chores, ChoreKind};

    fn complete_bipartite_2x2() -> CliqueSeed {
        CliqueSeed { k: 2, class_size: 2, edges: vec![(0, 2), (0, 3), (1, 2), (1, 3)] }
    }

    fn assert_binary_goods(inst: &Instance) {
        assert!(inst.values().iter().all(|x| x.is_zero() || *x == Value::one()));
        assert!(classify_chores(inst).iter().flatten().all(|&c| c == ChoreKind::None));
    }

    #[test]
    fn two_colors_sizes() {
        let seed = complete_bipartite_2x2();
        let inst = clique_to_ef_instance(&seed).unwrap();
        assert_eq!(inst.agents(), 8);
        assert_eq!(inst.item_count(), 3);
        assert_binary_goods(&inst);
        for edge in [[0, 2], [1, 3], [3, 0]] {
            let alloc = clique_witness(&seed, &edge).unwrap();
            assert!(check(&inst, &alloc, FairnessNotion::Ef).unwrap().pass, "{edge:?}");
        }
    }

    #[test]
    fn triangle_in_three_colors() {
        // Colors of size 2; triangle 0-2-4 plus one extra edge per pair.
        let seed = CliqueSeed { k: 3, class_size: 2, edges: vec![(0, 2), (1, 3), (0, 4), (1, 5), (2, 4), (3, 4)] };
        let inst = clique_to_ef_instance(&seed).unwrap();
        assert_eq!(inst.agents(), 12);
        assert_eq!(inst.item_count(), 6);
        assert_binary_goods(&inst);
        let alloc = clique_witness(&seed, &[0, 2, 4]).unwrap();
        assert!(check(&inst, &alloc, FairnessNotion::Ef).unwrap().pass);
        assert!(matches!(clique_witness(&seed, &[1, 2, 4]), Err(Error::InvalidCertificate(_))));
        assert!(matches!(clique_witness(&seed, &[0, 1, 4]), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn malformed_seeds() {
        let same_color = CliqueSeed { k: 2, class_size: 2, edges: vec![(0, 1)] };
        assert!(clique_to_ef_instance(&same_color).is_err());
        let uneven = CliqueSeed { k: 3, class_size: 1, edges: vec![(0, 1), (0, 2)] };
        assert!(clique_to_ef_instance(&uneven).is_err());
    }
}
