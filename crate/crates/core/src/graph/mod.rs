//! Immutable undirected simple graphs over `0..n` with bitset adjacency.

mod bitset;
mod io;

pub use bitset::VertexSet;
pub use io::{load_graph, parse_edge_list, save_graph, to_edge_list};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::prob::EdgeProb;

/// ChaCha stream reserved for graph generation. Samplers use streams `1..`.
pub const GENERATION_STREAM: u64 = 0;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![VertexSet::empty(n); n],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| {
                let mut s = VertexSet::full(n);
                s.remove(v);
                s
            })
            .collect();
        Graph {
            adj,
            edges: n * n.saturating_sub(1) / 2,
        }
    }

    /// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::InvalidArgument(format!(
                "vertex {} out of range for n = {n}",
                u.max(v)
            )));
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        if self.adj[u].contains(v) {
            return Err(Error::InvalidArgument(format!(
                "duplicate edge {} {}",
                u.min(v),
                u.max(v)
            )));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edges += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.above(u).iter().map(move |v| (u, v)).collect::<Vec<_>>())
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, s)| {
                let mut c = s.complement();
                c.remove(v);
                c
            })
            .collect();
        Graph {
            adj,
            edges: n * n.saturating_sub(1) / 2 - self.edges,
        }
    }

    /// True when every pair of distinct members is adjacent.
    pub fn is_clique(&self, members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Parameters of one `G(n,p)` draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub p: EdgeProb,
    pub seed: u64,
}

/// Samples `G(n,p)`: each unordered pair becomes an edge independently with
/// probability exactly `p`.
///
/// Pairs are visited in lexicographic order and each consumes one uniform
/// draw from `0..den(p)` on the generation stream of `seed`, so the result is
/// a pure function of `(n, p, seed)`.
pub fn generate_gnp(spec: &GenSpec) -> Graph {
    let n = spec.n;
    if spec.p.is_zero() {
        return Graph::empty(n);
    }
    if spec.p.is_one() {
        return Graph::complete(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(GENERATION_STREAM);
    let (num, den) = (spec.p.numer(), spec.p.denom());
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_range(0..den) < num {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
                g.edges += 1;
            }
        }
    }
    g
}

/// Vertices adjacent to every member of `chosen`, excluding `chosen` itself.
/// The empty selection yields every vertex.
pub fn common_neighbors(g: &Graph, chosen: &VertexSet) -> VertexSet {
    let mut out = VertexSet::full(g.n());
    for v in chosen {
        out.intersect_with(g.neighbors(v));
    }
    out.difference_with(chosen);
    out
}

/// Induced subgraph on the vertices that survive a removal, re-indexed
/// densely, together with the map back to the parent's labels.
#[derive(Debug, Clone)]
pub struct Residual {
    pub graph: Graph,
    /// `original[i]` is the parent label of residual vertex `i`.
    pub original: Vec<usize>,
}

pub fn remove_vertices(g: &Graph, removed: &VertexSet) -> Residual {
    let original: Vec<usize> = removed.complement().iter().collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in original.iter().enumerate() {
        index[v] = i;
    }
    let m = original.len();
    let mut graph = Graph::empty(m);
    for (i, &v) in original.iter().enumerate() {
        for u in &g.neighbors(v).above(v) {
            let j = index[u];
            if j != usize::MAX {
                graph.adj[i].insert(j);
                graph.adj[j].insert(i);
                graph.edges += 1;
            }
        }
    }
    Residual { graph, original }
}
