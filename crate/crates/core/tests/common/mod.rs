//! Shared helpers for the integration tests: independent reference
//! implementations that deliberately avoid the library's search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use turan_core::{canonical_form, Graph, RootedTree};

/// Every labelled tree on `n` vertices, via Prüfer sequences.
pub fn labelled_trees(n: usize) -> Vec<Graph> {
    if n == 1 {
        return vec![Graph::new(1)];
    }
    if n == 2 {
        return vec![Graph::path(2)];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut seq = vec![0; len];
            for slot in seq.iter_mut() {
                *slot = code % n;
                code /= n;
            }
            let mut degree = vec![1usize; n];
            for &x in &seq {
                degree[x] += 1;
            }
            let mut edges = Vec::with_capacity(n - 1);
            for &x in &seq {
                let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
                edges.push((leaf, x));
                degree[leaf] -= 1;
                degree[x] -= 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}

/// All rooted trees with `1..=max_edges` edges and a nonempty independent
/// root set leaving at least one unrooted vertex, one per isomorphism class.
pub fn rooted_trees(max_edges: usize) -> Vec<RootedTree> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 2..=max_edges + 1 {
        for g in labelled_trees(n) {
            for mask in 1u32..(1 << n) - 1 {
                let roots: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
                if g.edges().any(|(u, v)| mask & (1 << u) != 0 && mask & (1 << v) != 0) {
                    continue;
                }
                let key = canonical_form(&g, Some(&roots)).unwrap();
                if seen.insert(key) {
                    out.push(RootedTree::new(g.clone(), roots).unwrap());
                }
            }
        }
    }
    out
}

/// Brute-force isomorphism over all permutations.
pub fn isomorphic(g: &Graph, h: &Graph, g_marked: &[usize], h_marked: &[usize]) -> bool {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() || g_marked.len() != h_marked.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let marks_ok = g_marked.iter().all(|&v| h_marked.contains(&perm[v]));
        if marks_ok && g.edges().all(|(u, v)| h.has_edge(perm[u], perm[v])) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

/// Counts root-respecting injective homomorphisms by trying every injective
/// map of the unrooted vertices.
pub fn brute_force_rooted_count(g: &Graph, t: &RootedTree, roots: &[usize]) -> u64 {
    let unrooted = t.unrooted();
    let mut images = vec![usize::MAX; t.vertex_count()];
    for (&x, &w) in t.roots().iter().zip(roots) {
        images[x] = w;
    }
    fn go(g: &Graph, t: &RootedTree, unrooted: &[usize], i: usize, images: &mut Vec<usize>) -> u64 {
        if i == unrooted.len() {
            return u64::from(t.graph().edges().all(|(x, y)| g.has_edge(images[x], images[y])));
        }
        let mut total = 0;
        for w in 0..g.n() {
            if images.contains(&w) {
                continue;
            }
            images[unrooted[i]] = w;
            total += go(g, t, unrooted, i + 1, images);
            images[unrooted[i]] = usize::MAX;
        }
        total
    }
    go(g, t, &unrooted, 0, &mut images)
}

/// Largest number of common neighbours over pairs of distinct vertices,
/// computed with neighbourhood bit sets.
pub fn max_common_neighbours(g: &Graph) -> u32 {
    let words = g.n().div_ceil(64);
    let sets: Vec<Vec<u64>> = (0..g.n())
        .map(|v| {
            let mut bits = vec![0u64; words];
            for &w in g.neighbors(v) {
                bits[w / 64] |= 1 << (w % 64);
            }
            bits
        })
        .collect();
    let mut best = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let common: u32 = sets[u].iter().zip(&sets[v]).map(|(a, b)| (a & b).count_ones()).sum();
            best = best.max(common);
        }
    }
    best
}

/// Whether `g` contains a 4-cycle, i.e. two vertices with two common neighbours.
pub fn has_four_cycle(g: &Graph) -> bool {
    max_common_neighbours(g) >= 2
}

/// Calls `f` on every ordered tuple of `len` distinct vertices of `0..n`.
pub fn for_each_tuple(n: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, len: usize, prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if prefix.len() == len {
            f(prefix);
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                go(n, len, prefix, f);
                prefix.pop();
            }
        }
    }
    go(n, len, &mut Vec::new(), f);
}
