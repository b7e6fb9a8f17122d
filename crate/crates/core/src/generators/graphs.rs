//! Small simple graphs, mostly cubic ones for the bisection construction.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    /// Each edge stored once with `u < v`.
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Reject loops, repeated edges and out-of-range endpoints; normalize each
    /// edge to `u < v`.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidSeed(format!("edge ({}, {}) leaves the vertex range", u + 1, v + 1)));
            }
            if u == v {
                return Err(Error::InvalidSeed(format!("loop at vertex {}", u + 1)));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidSeed(format!("repeated edge ({}, {})", e.0 + 1, e.1 + 1)));
            }
            out.push(e);
        }
        Ok(Graph { vertices, edges: out })
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn is_cubic(&self) -> bool {
        self.degrees().iter().all(|&d| d == 3)
    }

    /// Number of edges with exactly one endpoint on `side`.
    pub fn cut_size(&self, side: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| side[u] != side[v]).count()
    }

    /// Every split into two halves with vertex 0 on the first side, as
    /// membership vectors for the first side.
    pub fn balanced_bisections(&self) -> Vec<Vec<bool>> {
        let n = self.vertices;
        assert!(n.is_multiple_of(2) && n < 32, "balanced bisections of small even graphs only");
        (0u32..1 << n)
            .filter(|mask| mask & 1 == 1 && mask.count_ones() as usize == n / 2)
            .map(|mask| (0..n).map(|v| mask >> v & 1 == 1).collect())
            .collect()
    }
}

pub fn complete4() -> Graph {
    Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Two triangles joined by a perfect matching.
pub fn prism() -> Graph {
    Graph::new(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
}

pub fn complete_bipartite33() -> Graph {
    let edges = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
    Graph::new(6, edges).unwrap()
}

/// The 3-cube.
pub fn cube() -> Graph {
    let mut edges = Vec::new();
    for u in 0..8usize {
        for bit in 0..3 {
            let v = u ^ (1 << bit);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Graph::new(8, edges).unwrap()
}

/// The 8-cycle plus its four long diagonals.
pub fn wagner() -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    edges.extend((0..4).map(|i| (i, i + 4)));
    Graph::new(8, edges).unwrap()
}

/// Uniform-ish random cubic simple graph by the pairing model with
/// rejection. `vertices` must be even and at least 4.
pub fn random_cubic(vertices: usize, seed: u64) -> Result<Graph> {
    if vertices < 4 || !vertices.is_multiple_of(2) {
        return Err(Error::InvalidSeed(format!("no cubic graph on {vertices} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..vertices).flat_map(|v| [v; 3]).collect();
    loop {
        points.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|p| (p[0], p[1])).collect();
        if let Ok(g) = Graph::new(vertices, edges) {
            return Ok(g);
        }
    }
}
