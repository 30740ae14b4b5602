//! The power family `T^p`: unions of `p` distinct labelled copies of a rooted
//! tree that agree on the roots.
//!
//! Members are stored with roots on vertices `0..r` (root `i` of the tree on
//! vertex `i`) and unrooted vertices numbered in order of first appearance.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form_colored;
use crate::embed::{EmbeddingPlan, RootedEmbedding};
use crate::error::{capacity, Result};
use crate::graph::Graph;
use crate::tree::RootedTree;

/// Default limit on `p * (v(T) - |R|)` for enumeration.
pub const DEFAULT_FAMILY_BOUND: usize = 14;

/// A member of `T^p` together with the copy maps it was glued from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub union_graph: Graph,
    /// `copy_maps[j][x]` is the union vertex of tree vertex `x` in copy `j`.
    pub copy_maps: Vec<Vec<usize>>,
    /// Union vertices of the roots, in root order.
    pub roots: Vec<usize>,
}

impl FamilyMember {
    pub fn vertex_count(&self) -> usize {
        self.union_graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.union_graph.edge_count()
    }

    /// Checks every structural invariant against the tree the member came from:
    /// copies are pairwise distinct, injective, edge preserving, agree on the
    /// roots, and together cover exactly the union graph.
    pub fn is_valid_for(&self, t: &RootedTree) -> bool {
        let g = &self.union_graph;
        let tg = t.graph();
        let mut covered = Graph::new(g.n());
        let mut seen_vertex = vec![false; g.n()];
        for (j, map) in self.copy_maps.iter().enumerate() {
            if map.len() != t.vertex_count() || self.copy_maps[..j].contains(map) {
                return false;
            }
            let mut image: Vec<usize> = map.clone();
            image.sort_unstable();
            image.dedup();
            if image.len() != map.len() || map.iter().any(|&x| x >= g.n()) {
                return false;
            }
            if t.roots().iter().zip(&self.roots).any(|(&r, &w)| map[r] != w) {
                return false;
            }
            for (x, y) in tg.edges() {
                if !g.has_edge(map[x], map[y]) {
                    return false;
                }
                covered.add_edge(map[x], map[y]).expect("edge of the union");
            }
            for &x in map {
                seen_vertex[x] = true;
            }
        }
        covered.edge_count() == g.edge_count() && seen_vertex.iter().all(|&s| s)
    }

    /// Colour 1 on every root, 0 elsewhere.
    pub fn root_colors(&self) -> Vec<u32> {
        let mut colors = vec![0u32; self.union_graph.n()];
        for &w in &self.roots {
            colors[w] = 1;
        }
        colors
    }
}

/// Labelling used while gluing: roots first, then unrooted tree vertices in
/// ascending order.
struct Layout {
    /// Tree vertices in layout order.
    order: Vec<usize>,
    roots: usize,
    edges: Vec<(usize, usize)>,
}

impl Layout {
    fn new(t: &RootedTree) -> Self {
        let mut order: Vec<usize> = t.roots().to_vec();
        order.extend(t.unrooted());
        let mut pos = vec![0; t.vertex_count()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let edges = t.graph().edges().map(|(x, y)| (pos[x], pos[y])).collect();
        Layout {
            order,
            roots: t.root_count(),
            edges,
        }
    }

    fn unrooted(&self) -> usize {
        self.order.len() - self.roots
    }

    /// Converts a map indexed by layout position into one indexed by tree vertex.
    fn to_tree_map(&self, by_pos: &[usize]) -> Vec<usize> {
        let mut map = vec![0; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            map[x] = by_pos[i];
        }
        map
    }

    fn identity(&self) -> Vec<usize> {
        (0..self.order.len()).collect()
    }
}

/// Calls `f` with every map of the unrooted layout positions into the
/// unrooted union vertices `roots..existing` or fresh vertices, injective,
/// fresh vertices numbered consecutively from `existing`.
fn for_each_extension<F>(layout: &Layout, existing: usize, f: &mut F)
where
    F: FnMut(&[usize], usize) -> bool,
{
    fn go<F>(
        layout: &Layout,
        existing: usize,
        pos: usize,
        fresh: usize,
        map: &mut Vec<usize>,
        f: &mut F,
    ) -> bool
    where
        F: FnMut(&[usize], usize) -> bool,
    {
        if pos == layout.order.len() {
            return f(map, fresh);
        }
        for target in layout.roots..existing {
            if map[layout.roots..pos].contains(&target) {
                continue;
            }
            map.push(target);
            let keep = go(layout, existing, pos + 1, fresh, map, f);
            map.pop();
            if !keep {
                return false;
            }
        }
        map.push(existing + fresh);
        let keep = go(layout, existing, pos + 1, fresh + 1, map, f);
        map.pop();
        keep
    }
    let mut map: Vec<usize> = (0..layout.roots).collect();
    go(layout, existing, layout.roots, 0, &mut map, f);
}

fn check_capacity(t: &RootedTree, p: usize, bound: usize) -> Result<()> {
    let total = p.saturating_mul(t.unrooted_count());
    if total > bound {
        return capacity(format!(
            "p * unrooted = {total} exceeds the family bound {bound}"
        ));
    }
    if total + t.root_count() > crate::canon::MAX_CANON_VERTICES {
        return capacity("family members would exceed 64 vertices");
    }
    Ok(())
}

pub fn enumerate_power(t: &RootedTree, p: usize) -> Result<Vec<FamilyMember>> {
    enumerate_power_with_bound(t, p, DEFAULT_FAMILY_BOUND)
}

/// One member of `T^p` per isomorphism class, where isomorphisms must map
/// roots to roots (without respecting individual root labels).
///
/// Built level by level: every member of `T^{k+1}` is either a member of
/// `T^k` extended by a copy that adds at least one edge, or a member of `T^k`
/// that already holds `k + 1` copies. Both cases depend only on the union
/// graph, so each level is reduced modulo root-labelled isomorphism before
/// being extended.
pub fn enumerate_power_with_bound(
    t: &RootedTree,
    p: usize,
    bound: usize,
) -> Result<Vec<FamilyMember>> {
    if p == 0 {
        return Ok(Vec::new());
    }
    check_capacity(t, p, bound)?;
    let layout = Layout::new(t);
    let r = layout.roots;
    let canon_bound = r + p * layout.unrooted();
    let labelled_colors = |n: usize| -> Vec<u32> {
        (0..n).map(|v| if v < r { v as u32 + 1 } else { 0 }).collect()
    };

    let base = Graph::from_edges(layout.order.len(), layout.edges.iter().copied())?;
    let mut level: Vec<(Graph, Vec<Vec<usize>>)> = vec![(base, vec![layout.identity()])];
    let plan = EmbeddingPlan::new(&layout_tree(&layout)?);
    let root_tuple: Vec<usize> = (0..r).collect();

    for k in 1..p {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut next: Vec<(Graph, Vec<Vec<usize>>)> = Vec::new();
        for (h, copies) in &level {
            let existing = h.n();
            let mut failure = None;
            for_each_extension(&layout, existing, &mut |map, fresh| {
                let adds_edge = fresh > 0 || layout.edges.iter().any(|&(x, y)| !h.has_edge(map[x], map[y]));
                if !adds_edge {
                    return true;
                }
                let mut g = Graph::new(existing + fresh);
                for (u, v) in h.edges().chain(layout.edges.iter().map(|&(x, y)| (map[x], map[y]))) {
                    g.add_edge(u, v).expect("copy edges are valid");
                }
                match canonical_form_colored(&g, &labelled_colors(g.n()), canon_bound) {
                    Ok(code) => {
                        if seen.insert(code) {
                            let mut c = copies.clone();
                            c.push(map.to_vec());
                            next.push((g, c));
                        }
                        true
                    }
                    Err(e) => {
                        failure = Some(e);
                        false
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            // Enough copies inside `h` already.
            let inside = plan.collect(h, &root_tuple, k + 1);
            if inside.len() > k {
                let code = canonical_form_colored(h, &labelled_colors(h.n()), canon_bound)?;
                if seen.insert(code) {
                    let extra = inside
                        .into_iter()
                        .map(|e| e.images)
                        .find(|m| !copies.contains(m))
                        .expect("k + 1 embeddings include one beyond the k chosen copies");
                    let mut c = copies.clone();
                    c.push(extra);
                    next.push((h.clone(), c));
                }
            }
        }
        level = next;
    }

    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut members = Vec::new();
    for (g, copies) in level {
        let member = FamilyMember {
            copy_maps: copies.iter().map(|c| layout.to_tree_map(c)).collect(),
            roots: (0..r).collect(),
            union_graph: g,
        };
        let code = canonical_form_colored(&member.union_graph, &member.root_colors(), canon_bound)?;
        if seen.insert(code) {
            members.push(member);
        }
    }
    Ok(members)
}

/// The tree relabelled into layout order (roots `0..r`).
fn layout_tree(layout: &Layout) -> Result<RootedTree> {
    let g = Graph::from_edges(layout.order.len(), layout.edges.iter().copied())?;
    RootedTree::new(g, (0..layout.roots).collect())
}

/// Witness that a host graph contains a member of `T^p`: a root tuple and `p`
/// distinct rooted embeddings on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerWitness {
    pub roots: Vec<usize>,
    pub copies: Vec<RootedEmbedding>,
}

impl PowerWitness {
    /// `p` pairwise distinct embeddings of `t` into `g`, all on `roots`.
    pub fn is_valid(&self, g: &Graph, t: &RootedTree, p: usize) -> bool {
        if self.copies.len() < p {
            return false;
        }
        let distinct: HashSet<&RootedEmbedding> = self.copies.iter().collect();
        distinct.len() == self.copies.len()
            && self.copies.iter().all(|e| {
                let images = &e.images;
                let mut sorted = images.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == images.len()
                    && images.iter().all(|&w| w < g.n())
                    && t.roots().iter().zip(&self.roots).all(|(&r, &w)| images[r] == w)
                    && t.graph().edges().all(|(x, y)| g.has_edge(images[x], images[y]))
            })
    }
}

/// Calls `f` on every ordered tuple of `len` distinct vertices of `0..n`
/// (in lexicographic order) whose `i`-th entry passes `allowed(i, v)`.
/// Stops when `f` returns `false`.
pub(crate) fn for_each_tuple<A, F>(n: usize, len: usize, allowed: &A, prefix: &mut Vec<usize>, f: &mut F) -> bool
where
    A: Fn(usize, usize) -> bool,
    F: FnMut(&[usize]) -> bool,
{
    if prefix.len() == len {
        return f(prefix);
    }
    let i = prefix.len();
    for v in 0..n {
        if prefix.contains(&v) || !allowed(i, v) {
            continue;
        }
        prefix.push(v);
        let keep = for_each_tuple(n, len, allowed, prefix, f);
        prefix.pop();
        if !keep {
            return false;
        }
    }
    true
}

/// Whether `g` contains a member of `T^p`, i.e. some tuple of distinct
/// vertices carries at least `p` distinct rooted copies of `t`. Returns the
/// lexicographically least such tuple with its first `p` copies.
pub fn contains_member(g: &Graph, t: &RootedTree, p: usize) -> Option<PowerWitness> {
    let plan = EmbeddingPlan::new(t);
    let r = t.root_count();
    let root_degree: Vec<usize> = t.roots().iter().map(|&x| t.graph().degree(x)).collect();
    let allowed = |i: usize, v: usize| g.degree(v) >= root_degree[i];
    let search_from = |prefix: Vec<usize>| -> Option<PowerWitness> {
        let mut prefix = prefix;
        let mut found = None;
        for_each_tuple(g.n(), r, &allowed, &mut prefix, &mut |tuple| {
            let copies = plan.collect(g, tuple, p);
            if copies.len() >= p {
                found = Some(PowerWitness {
                    roots: tuple.to_vec(),
                    copies,
                });
                false
            } else {
                true
            }
        });
        found
    };
    if p == 0 {
        return (r <= g.n()).then(|| PowerWitness {
            roots: (0..r).collect(),
            copies: Vec::new(),
        });
    }
    if r == 0 {
        return search_from(Vec::new());
    }
    (0..g.n())
        .into_par_iter()
        .filter(|&v| allowed(0, v))
        .find_map_first(|v| search_from(vec![v]))
}

/// The single graph `T^p` in which the copies share only their roots.
/// Roots sit on vertices `0..r`; copy `j` occupies the next block of unrooted
/// vertices.
pub fn disjoint_power(t: &RootedTree, p: usize) -> Graph {
    let layout = Layout::new(t);
    let r = layout.roots;
    let a = layout.unrooted();
    let mut g = Graph::new(r + p * a);
    for j in 0..p {
        let place = |x: usize| if x < r { x } else { x + j * a };
        for &(x, y) in &layout.edges {
            g.add_edge(place(x), place(y)).expect("disjoint copy edges are valid");
        }
    }
    g
}

/// Subgraph (not necessarily induced) containment by backtracking; intended
/// for small patterns.
pub fn contains_subgraph(host: &Graph, pattern: &Graph) -> bool {
    let k = pattern.n();
    if k > host.n() || pattern.edge_count() > host.edge_count() {
        return false;
    }
    // Connected-first order: repeatedly take the unplaced vertex with the most
    // placed neighbours, ties to higher degree.
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = pattern.neighbors(v).iter().filter(|&&w| placed[w]).count();
                (back, pattern.degree(v), std::cmp::Reverse(v))
            })
            .expect("an unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; host.n()];
    fn go(host: &Graph, pattern: &Graph, order: &[usize], depth: usize, image: &mut [usize], used: &mut [bool]) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        let back: Vec<usize> = pattern
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| image[w] != usize::MAX)
            .collect();
        let candidates: Vec<usize> = match back.first() {
            Some(&w) => host.neighbors(image[w]).to_vec(),
            None => (0..host.n()).collect(),
        };
        for c in candidates {
            if used[c] || host.degree(c) < pattern.degree(v) {
                continue;
            }
            if !back.iter().all(|&w| host.has_edge(image[w], c)) {
                continue;
            }
            image[v] = c;
            used[c] = true;
            if go(host, pattern, order, depth + 1, image, used) {
                return true;
            }
            used[c] = false;
            image[v] = usize::MAX;
        }
        false
    }
    go(host, pattern, &order, 0, &mut image, &mut used)
}

pub fn check_family_density(t: &RootedTree, s: usize) -> Result<(bool, Option<FamilyMember>)> {
    check_family_density_with_bound(t, s, DEFAULT_FAMILY_BOUND)
}

/// Checks `e(H) >= rho_T (|H| - |R|)` for every union `H` of at most `s`
/// distinct copies, returning the first violator found.
///
/// Walks raw gluing patterns (copy one fixed, later copies mapped into the
/// current union or onto fresh vertices) without isomorphism reduction, so
/// the cost is one incremental edge count per pattern.
pub fn check_family_density_with_bound(
    t: &RootedTree,
    s: usize,
    bound: usize,
) -> Result<(bool, Option<FamilyMember>)> {
    let rho = t.density()?;
    check_capacity(t, s, bound)?;
    if s == 0 {
        return Ok((true, None));
    }
    let layout = Layout::new(t);
    let r = layout.roots;
    let (num, den) = (*rho.numer(), *rho.denom());
    // e(H) * den >= num * (|H| - r)
    let violates = |edges: usize, vertices: usize| (edges as u64) * den < num * (vertices - r) as u64;

    let mut adj = vec![0u64; r + s * layout.unrooted()];
    for &(x, y) in &layout.edges {
        adj[x] |= 1 << y;
        adj[y] |= 1 << x;
    }
    let mut copies = vec![layout.identity()];
    let vertices = layout.order.len();
    let edges = layout.edges.len();
    if violates(edges, vertices) {
        return Ok((false, Some(materialise(&layout, &adj, vertices, &copies))));
    }
    let mut walker = DensityWalker {
        layout: &layout,
        depth_limit: s,
        adj,
        copies: &mut copies,
        violates: &violates,
        found: None,
    };
    walker.walk(vertices, edges);
    match walker.found {
        Some(member) => Ok((false, Some(member))),
        None => Ok((true, None)),
    }
}

struct DensityWalker<'a, V> {
    layout: &'a Layout,
    depth_limit: usize,
    adj: Vec<u64>,
    copies: &'a mut Vec<Vec<usize>>,
    violates: &'a V,
    found: Option<FamilyMember>,
}

impl<V: Fn(usize, usize) -> bool> DensityWalker<'_, V> {
    fn walk(&mut self, vertices: usize, edges: usize) {
        if self.copies.len() == self.depth_limit {
            return;
        }
        let layout = self.layout;
        let mut maps: Vec<(Vec<usize>, usize)> = Vec::new();
        for_each_extension(layout, vertices, &mut |map, fresh| {
            maps.push((map.to_vec(), fresh));
            true
        });
        for (map, fresh) in maps {
            if self.copies.contains(&map) {
                continue;
            }
            let mut added: Vec<(usize, usize)> = Vec::new();
            for &(x, y) in &layout.edges {
                let (u, v) = (map[x], map[y]);
                if self.adj[u] & (1 << v) == 0 {
                    self.adj[u] |= 1 << v;
                    self.adj[v] |= 1 << u;
                    added.push((u, v));
                }
            }
            let (nv, ne) = (vertices + fresh, edges + added.len());
            self.copies.push(map);
            if (self.violates)(ne, nv) {
                self.found = Some(materialise(layout, &self.adj, nv, self.copies));
            } else {
                self.walk(nv, ne);
            }
            self.copies.pop();
            for (u, v) in added {
                self.adj[u] &= !(1 << v);
                self.adj[v] &= !(1 << u);
            }
            if self.found.is_some() {
                return;
            }
        }
    }
}

fn materialise(layout: &Layout, adj: &[u64], vertices: usize, copies: &[Vec<usize>]) -> FamilyMember {
    let mut g = Graph::new(vertices);
    for (u, &row) in adj.iter().enumerate().take(vertices) {
        for v in u + 1..vertices {
            if row & (1 << v) != 0 {
                g.add_edge(u, v).expect("valid union edge");
            }
        }
    }
    FamilyMember {
        union_graph: g,
        copy_maps: copies.iter().map(|c| layout.to_tree_map(c)).collect(),
        roots: (0..layout.roots).collect(),
    }
}
