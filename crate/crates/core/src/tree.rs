//! Rooted trees, their edge densities, and the balanced family `T_{a,b}`.

use std::collections::VecDeque;

use num_rational::Ratio;

use crate::error::{arg, capacity, Error, Result};
use crate::graph::Graph;

/// Default limit on the number of unrooted vertices for [`RootedTree::is_balanced`].
pub const DEFAULT_BALANCE_BOUND: usize = 24;

/// A tree together with an ordered, independent set of root vertices.
///
/// Root order matters: a root tuple `(w_1, ..., w_r)` in a host graph is
/// matched position by position against `roots()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    tree: Graph,
    roots: Vec<usize>,
    is_root: Vec<bool>,
}

/// Densities of a rooted tree and its sparsest unrooted subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub rho_t: Ratio<u64>,
    /// Unrooted subset of minimum density, ties broken towards smaller sets.
    pub worst_subset: Option<Vec<usize>>,
    pub rho_s: Option<Ratio<u64>>,
}

impl RootedTree {
    pub fn new(tree: Graph, roots: Vec<usize>) -> Result<Self> {
        let n = tree.n();
        if n == 0 {
            return arg("a tree needs at least one vertex");
        }
        if tree.edge_count() + 1 != n {
            return arg(format!(
                "{} edges on {} vertices is not a tree",
                tree.edge_count(),
                n
            ));
        }
        if reachable_from(&tree, 0).iter().any(|&seen| !seen) {
            return arg("graph is not connected");
        }
        let mut is_root = vec![false; n];
        for &r in &roots {
            if r >= n {
                return arg(format!("root {r} out of range"));
            }
            if is_root[r] {
                return arg(format!("root {r} listed twice"));
            }
            is_root[r] = true;
        }
        if let Some((u, v)) = tree.edges().find(|&(u, v)| is_root[u] && is_root[v]) {
            return arg(format!("roots {u} and {v} are adjacent"));
        }
        Ok(RootedTree {
            tree,
            roots,
            is_root,
        })
    }

    /// Path with `len` edges whose two endpoints are the roots.
    pub fn path_with_rooted_ends(len: usize) -> Self {
        assert!(len >= 2, "rooted endpoints of a single edge would be adjacent");
        RootedTree::new(Graph::path(len + 1), vec![0, len]).expect("valid rooted path")
    }

    pub fn graph(&self) -> &Graph {
        &self.tree
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.is_root[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.tree.n()
    }

    pub fn edge_count(&self) -> usize {
        self.tree.edge_count()
    }

    /// Unrooted vertices in ascending order.
    pub fn unrooted(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.is_root[v]).collect()
    }

    pub fn unrooted_count(&self) -> usize {
        self.vertex_count() - self.roots.len()
    }

    /// Proper 2-colouring of the tree, vertex 0 on side 0.
    pub fn sides(&self) -> Vec<u8> {
        let n = self.vertex_count();
        let mut side = vec![u8::MAX; n];
        side[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in self.tree.neighbors(v) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[v];
                    queue.push_back(w);
                }
            }
        }
        side
    }

    /// `e(T) / (v(T) - |R|)`.
    pub fn density(&self) -> Result<Ratio<u64>> {
        let unrooted = self.unrooted_count();
        if unrooted == 0 {
            return Err(Error::Domain(
                "density undefined when every vertex is a root".into(),
            ));
        }
        Ok(Ratio::new(self.edge_count() as u64, unrooted as u64))
    }

    /// `e(S) / |S|` where `e(S)` counts tree edges with at least one endpoint in `S`.
    pub fn subset_density(&self, subset: &[usize]) -> Result<Ratio<u64>> {
        if subset.is_empty() {
            return arg("subset must be nonempty");
        }
        let mut member = vec![false; self.vertex_count()];
        for &v in subset {
            if v >= self.vertex_count() {
                return arg(format!("vertex {v} out of range"));
            }
            if self.is_root[v] {
                return arg(format!("vertex {v} is a root"));
            }
            if member[v] {
                return arg(format!("vertex {v} listed twice"));
            }
            member[v] = true;
        }
        let touching = self
            .tree
            .edges()
            .filter(|&(u, v)| member[u] || member[v])
            .count();
        Ok(Ratio::new(touching as u64, subset.len() as u64))
    }

    pub fn is_balanced(&self) -> Result<(bool, DensityReport)> {
        self.is_balanced_with_bound(DEFAULT_BALANCE_BOUND)
    }

    /// Checks `rho_S >= rho_T` over all `2^a - 1` nonempty unrooted subsets.
    pub fn is_balanced_with_bound(&self, bound: usize) -> Result<(bool, DensityReport)> {
        let rho_t = self.density()?;
        let unrooted = self.unrooted();
        let a = unrooted.len();
        if a > bound || a >= 64 {
            return capacity(format!(
                "{a} unrooted vertices exceeds the balance-check bound {bound}"
            ));
        }
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in unrooted.iter().enumerate() {
            position[v] = i;
        }
        // Bit mask of the unrooted endpoints of every edge.
        let edge_masks: Vec<u64> = self
            .tree
            .edges()
            .map(|(u, v)| {
                [u, v]
                    .iter()
                    .filter(|&&x| position[x] != usize::MAX)
                    .fold(0u64, |m, &x| m | (1 << position[x]))
            })
            .collect();

        let mut best: Option<(Ratio<u64>, u32, u64)> = None;
        for mask in 1u64..(1u64 << a) {
            let touching = edge_masks.iter().filter(|&&m| m & mask != 0).count() as u64;
            let size = mask.count_ones();
            let rho = Ratio::new(touching, u64::from(size));
            let better = match best {
                None => true,
                Some((r, s, _)) => rho < r || (rho == r && size < s),
            };
            if better {
                best = Some((rho, size, mask));
            }
        }
        let (rho_s, _, mask) = best.expect("at least one unrooted vertex");
        let worst: Vec<usize> = (0..a)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| unrooted[i])
            .collect();
        Ok((
            rho_s >= rho_t,
            DensityReport {
                rho_t,
                worst_subset: Some(worst),
                rho_s: Some(rho_s),
            },
        ))
    }
}

fn reachable_from(g: &Graph, start: usize) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Builds the balanced rooted tree `T_{a,b}` with `a` unrooted vertices and
/// `b` edges.
///
/// Vertices `0..a` form the base path; rooted leaves follow in attachment
/// order. For `a - 1 <= b < 2a - 1` and `i = b - a`, leaves hang off path
/// positions `1, floor(1 + j a / i) (0 < j < i), a` (1-based); `i = 0` puts a
/// single leaf on position 1 and `i = -1` attaches nothing. Larger `b` adds one
/// rooted leaf to every path vertex of `T_{a,b-a}`.
pub fn build_t_ab(a: usize, b: usize) -> Result<RootedTree> {
    if a == 0 {
        return arg("a must be at least 1");
    }
    if b + 1 < a {
        return arg(format!("b = {b} is below a - 1 = {}", a - 1));
    }
    let mut edges: Vec<(usize, usize)> = (1..a).map(|v| (v - 1, v)).collect();
    let mut roots = Vec::new();
    let attach = |edges: &mut Vec<(usize, usize)>, roots: &mut Vec<usize>, at: usize| {
        let leaf = a + roots.len();
        edges.push((at, leaf));
        roots.push(leaf);
    };

    let rounds = if b >= 2 * a - 1 { (b - (a - 1)) / a } else { 0 };
    let base_b = b - rounds * a;
    if base_b >= a {
        let i = base_b - a;
        if i == 0 {
            attach(&mut edges, &mut roots, 0);
        } else {
            // 1-based positions 1, floor(1 + j*a/i), a.
            let mut positions = vec![1];
            positions.extend((1..i).map(|j| 1 + j * a / i));
            positions.push(a);
            for p in positions {
                attach(&mut edges, &mut roots, p - 1);
            }
        }
    }
    for _ in 0..rounds {
        for v in 0..a {
            attach(&mut edges, &mut roots, v);
        }
    }

    let n = a + roots.len();
    let tree = Graph::from_edges(n, edges)?;
    RootedTree::new(tree, roots)
}
