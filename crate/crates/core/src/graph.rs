//! Finite simple undirected graphs.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

/// A finite simple graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted so `has_edge` is a binary search and edge
/// iteration order is deterministic. An optional bipartition tags every vertex
/// with side 0 or 1; when present, every edge joins the two sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    bipartition: Option<Vec<u8>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
            bipartition: None,
        }
    }

    /// Builds a graph from an edge list. Repeated pairs collapse to one edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("valid clique")
    }

    /// `K_{left,right}` with the left side on `0..left`.
    pub fn complete_bipartite(left: usize, right: usize) -> Self {
        let edges = (0..left).flat_map(|u| (0..right).map(move |v| (u, left + v)));
        let sides = (0..left + right).map(|v| u8::from(v >= left)).collect();
        Graph::from_edges(left + right, edges)
            .and_then(|g| g.with_bipartition(sides))
            .expect("valid complete bipartite graph")
    }

    /// Inserts the edge `{u, v}`; returns whether it was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        if u >= n || v >= n {
            return arg(format!("edge ({u}, {v}) out of range for {n} vertices"));
        }
        if u == v {
            return arg(format!("self-loop at vertex {u}"));
        }
        if let Some(sides) = &self.bipartition {
            if sides[u] == sides[v] {
                return arg(format!("edge ({u}, {v}) lies inside one side of the bipartition"));
            }
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Attaches a bipartition; fails if some edge lies inside a side.
    pub fn with_bipartition(mut self, sides: Vec<u8>) -> Result<Self> {
        if sides.len() != self.n() {
            return arg(format!(
                "bipartition has {} tags for {} vertices",
                sides.len(),
                self.n()
            ));
        }
        if sides.iter().any(|&s| s > 1) {
            return arg("bipartition tags must be 0 or 1");
        }
        if let Some((u, v)) = self.edges().find(|&(u, v)| sides[u] == sides[v]) {
            return arg(format!("edge ({u}, {v}) lies inside one side of the bipartition"));
        }
        self.bipartition = Some(sides);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn bipartition(&self) -> Option<&[u8]> {
        self.bipartition.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Average degree `2e/n` as an exact rational (zero for the empty graph).
    pub fn average_degree(&self) -> Ratio<u64> {
        if self.n() == 0 {
            return Ratio::from_integer(0);
        }
        Ratio::new(2 * self.edge_count as u64, self.n() as u64)
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the
    /// given order. The bipartition, if any, is carried over.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut sub = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    sub.add_edge(i, j).expect("induced edge is valid");
                }
            }
        }
        sub.bipartition = self
            .bipartition
            .as_ref()
            .map(|sides| vertices.iter().map(|&v| sides[v]).collect());
        sub
    }

    /// Copy of the graph with every edge at the given vertices removed. Vertex
    /// numbering is unchanged; the deleted vertices become isolated.
    pub fn isolate_vertices(&self, vertices: &BTreeSet<usize>) -> Graph {
        let mut g = Graph::new(self.n());
        g.bipartition = self.bipartition.clone();
        for (u, v) in self.edges() {
            if !vertices.contains(&u) && !vertices.contains(&v) {
                g.add_edge(u, v).expect("edge of a valid graph");
            }
        }
        g
    }
}

/// Result of [`min_degree_subgraph`]: the induced subgraph together with the
/// original label of each of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub vertices: Vec<usize>,
}

impl Subgraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Repeatedly deletes a vertex of degree below `threshold` until none is left.
///
/// Vertices below the threshold are processed in ascending index order. The
/// surviving set does not depend on that order: it is the largest induced
/// subgraph with minimum degree at least `threshold`.
pub fn min_degree_subgraph(g: &Graph, threshold: Ratio<u64>) -> Subgraph {
    let n = g.n();
    let below = |deg: usize| Ratio::from_integer(deg as u64) < threshold;
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut worklist: BTreeSet<usize> = (0..n).filter(|&v| below(degree[v])).collect();
    while let Some(v) = worklist.pop_first() {
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
                if below(degree[w]) {
                    worklist.insert(w);
                }
            }
        }
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    Subgraph {
        graph: g.induced_subgraph(&vertices),
        vertices,
    }
}
