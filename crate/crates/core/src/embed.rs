//! Counting and listing embeddings of rooted trees with prescribed root images.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::graph::Graph;
use crate::tree::RootedTree;

/// An injective, edge-preserving map from tree vertices into a host graph.
/// `images[x]` is the host vertex of tree vertex `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootedEmbedding {
    pub images: Vec<usize>,
}

/// Placement order for the unrooted vertices of a tree: a multi-source BFS
/// from the roots (or from vertex 0 when there are none).
#[derive(Debug, Clone)]
pub(crate) struct EmbeddingPlan {
    roots: Vec<usize>,
    /// `(vertex, earlier neighbours)`; the first earlier neighbour anchors the
    /// candidate list, the rest are checked for adjacency.
    steps: Vec<(usize, Vec<usize>)>,
    vertex_count: usize,
}

impl EmbeddingPlan {
    pub(crate) fn new(t: &RootedTree) -> Self {
        let g = t.graph();
        let n = g.n();
        let mut placed = vec![false; n];
        let mut queue: VecDeque<usize> = t.roots().iter().copied().collect();
        for &r in t.roots() {
            placed[r] = true;
        }
        let mut steps = Vec::with_capacity(t.unrooted_count());
        let place = |v: usize, placed: &mut Vec<bool>, steps: &mut Vec<(usize, Vec<usize>)>| {
            let earlier: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| placed[w]).collect();
            placed[v] = true;
            steps.push((v, earlier));
        };
        if queue.is_empty() {
            place(0, &mut placed, &mut steps);
            queue.push_back(0);
        }
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !placed[w] {
                    place(w, &mut placed, &mut steps);
                    queue.push_back(w);
                }
            }
        }
        EmbeddingPlan {
            roots: t.roots().to_vec(),
            steps,
            vertex_count: n,
        }
    }

    fn validate(&self, g: &Graph, roots: &[usize]) -> Result<()> {
        if roots.len() != self.roots.len() {
            return arg(format!(
                "expected {} root vertices, got {}",
                self.roots.len(),
                roots.len()
            ));
        }
        for (i, &w) in roots.iter().enumerate() {
            if w >= g.n() {
                return arg(format!("root vertex {w} out of range"));
            }
            if roots[..i].contains(&w) {
                return arg(format!("root vertex {w} repeated"));
            }
        }
        Ok(())
    }

    /// Runs the backtracking search, calling `visit` on every complete image
    /// vector. `visit` returns `false` to stop early.
    fn search<F>(&self, g: &Graph, roots: &[usize], mut visit: F)
    where
        F: FnMut(&[usize]) -> bool,
    {
        let mut images = vec![usize::MAX; self.vertex_count];
        for (&r, &w) in self.roots.iter().zip(roots) {
            images[r] = w;
        }
        let mut used: Vec<usize> = roots.to_vec();
        self.extend(g, 0, &mut images, &mut used, &mut visit);
    }

    fn extend<F>(
        &self,
        g: &Graph,
        depth: usize,
        images: &mut [usize],
        used: &mut Vec<usize>,
        visit: &mut F,
    ) -> bool
    where
        F: FnMut(&[usize]) -> bool,
    {
        let Some((v, earlier)) = self.steps.get(depth) else {
            return visit(images);
        };
        let all: Vec<usize>;
        let candidates: &[usize] = match earlier.first() {
            Some(&anchor) => g.neighbors(images[anchor]),
            None => {
                all = (0..g.n()).collect();
                &all
            }
        };
        for &c in candidates {
            if used.contains(&c) {
                continue;
            }
            if !earlier.iter().skip(1).all(|&w| g.has_edge(images[w], c)) {
                continue;
            }
            images[*v] = c;
            used.push(c);
            let keep_going = self.extend(g, depth + 1, images, used, visit);
            used.pop();
            if !keep_going {
                images[*v] = usize::MAX;
                return false;
            }
        }
        images[*v] = usize::MAX;
        true
    }
}

/// Number of injective homomorphisms of `t` into `g` sending root `i` to `roots[i]`.
pub fn count_rooted_embeddings(g: &Graph, t: &RootedTree, roots: &[usize]) -> Result<u64> {
    count_rooted_embeddings_up_to(g, t, roots, u64::MAX)
}

/// Like [`count_rooted_embeddings`] but stops once `limit` embeddings are found.
pub fn count_rooted_embeddings_up_to(
    g: &Graph,
    t: &RootedTree,
    roots: &[usize],
    limit: u64,
) -> Result<u64> {
    let plan = EmbeddingPlan::new(t);
    plan.validate(g, roots)?;
    Ok(plan.count(g, roots, limit))
}

impl EmbeddingPlan {
    /// Count without argument validation; callers guarantee a valid tuple.
    pub(crate) fn count(&self, g: &Graph, roots: &[usize], limit: u64) -> u64 {
        let mut count = 0u64;
        if limit == 0 {
            return 0;
        }
        self.search(g, roots, |_| {
            count += 1;
            count < limit
        });
        count
    }

    pub(crate) fn collect(&self, g: &Graph, roots: &[usize], limit: usize) -> Vec<RootedEmbedding> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        self.search(g, roots, |images| {
            out.push(RootedEmbedding {
                images: images.to_vec(),
            });
            out.len() < limit
        });
        out
    }
}

/// All rooted embeddings, sorted lexicographically by image vector.
pub fn list_rooted_embeddings(
    g: &Graph,
    t: &RootedTree,
    roots: &[usize],
) -> Result<Vec<RootedEmbedding>> {
    let plan = EmbeddingPlan::new(t);
    plan.validate(g, roots)?;
    let mut all = plan.collect(g, roots, usize::MAX);
    all.sort();
    Ok(all)
}
