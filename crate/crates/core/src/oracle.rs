//! Ground-truth tools: the constructive witness search behind the upper
//! bound, exact extremal numbers on tiny vertex sets, and exponent fitting.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form_with_bound;
use crate::embed::RootedEmbedding;
use crate::error::{arg, capacity, Result};
use crate::family::{contains_member, contains_subgraph, PowerWitness};
use crate::graph::{min_degree_subgraph, Graph};
use crate::tree::RootedTree;

/// Largest `n` accepted by [`exact_extremal_number`].
pub const MAX_EXACT_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearch {
    /// `p` distinct rooted copies on a common root tuple, in host labels.
    pub witness: Option<PowerWitness>,
    /// Whether `e(G) >= c n^(2 - 1/rho_T)` with `c = 2 min(|T|, p)`.
    pub hypothesis_met: bool,
    /// Whether `(c/2)^(|T| - 1) >= p`, the margin the final pigeonhole step needs.
    pub pigeonhole_margin: bool,
    /// Vertices left after peeling to minimum degree at least half the average.
    pub core_vertices: Vec<usize>,
    pub found_in_core: bool,
}

/// `2 min(|T|, p)`.
pub fn proof_constant(t: &RootedTree, p: usize) -> u64 {
    2 * t.vertex_count().min(p) as u64
}

/// Whether `edges >= c n^(2 - a/b)` where `rho_T = b/a`.
pub fn meets_edge_hypothesis(t: &RootedTree, n: usize, edges: usize, c: u64) -> bool {
    let b = t.edge_count() as u32;
    let a = t.unrooted_count() as u32;
    if a == 0 || b == 0 {
        return false;
    }
    // Equivalent to edges^b >= c^b n^(2b - a).
    let lhs = (edges as u128).checked_pow(b);
    let rhs = (c as u128)
        .checked_pow(b)
        .and_then(|cb| (n as u128).checked_pow(2 * b - a).and_then(|nb| cb.checked_mul(nb)));
    match (lhs, rhs) {
        (Some(l), Some(r)) => l >= r,
        _ => {
            let exponent = 2.0 - f64::from(a) / f64::from(b);
            (edges as f64).ln() >= (c as f64).ln() + exponent * (n as f64).ln()
        }
    }
}

/// `(c/2)^(|T| - 1) >= p` for `c = 2 min(|T|, p)`.
pub fn pigeonhole_margin(t: &RootedTree, p: usize) -> bool {
    let half = t.vertex_count().min(p) as u128;
    let needed = p as u128;
    let mut acc: u128 = 1;
    for _ in 1..t.vertex_count() {
        acc = acc.saturating_mul(half);
        if acc >= needed {
            return true;
        }
    }
    acc >= needed
}

/// Labelled copies of an `m`-vertex tree guaranteed by greedy extension in a
/// graph with `n` vertices of minimum degree `delta`: `n (delta-1) ... (delta-m+1)`.
pub fn greedy_copy_lower_bound(n: usize, delta: usize, m: usize) -> u128 {
    if m == 0 {
        return 1;
    }
    (1..m).fold(n as u128, |acc, j| acc.saturating_mul(delta.saturating_sub(j) as u128))
}

/// Runs the upper-bound argument as a search: peel `g` to its core of minimum
/// degree at least half the average degree, then look for a root tuple with
/// `p` copies there (lexicographically least tuple first). Falls back to the
/// whole graph when the core has none.
pub fn find_power_witness(g: &Graph, t: &RootedTree, p: usize) -> Result<WitnessSearch> {
    if t.root_count() == 0 {
        return arg("the witness search needs at least one root");
    }
    if p == 0 {
        return arg("p must be positive");
    }
    let c = proof_constant(t, p);
    let hypothesis_met = meets_edge_hypothesis(t, g.n(), g.edge_count(), c);
    let core = min_degree_subgraph(g, g.average_degree() / Ratio::from_integer(2));

    let mut found_in_core = false;
    let mut witness = None;
    if !core.is_empty() {
        if let Some(w) = contains_member(&core.graph, t, p) {
            let lift = |v: usize| core.vertices[v];
            witness = Some(PowerWitness {
                roots: w.roots.iter().map(|&v| lift(v)).collect(),
                copies: w
                    .copies
                    .iter()
                    .map(|e| RootedEmbedding {
                        images: e.images.iter().map(|&v| lift(v)).collect(),
                    })
                    .collect(),
            });
            found_in_core = true;
        }
    }
    if witness.is_none() && core.vertices.len() < g.n() {
        witness = contains_member(g, t, p);
    }
    Ok(WitnessSearch {
        witness,
        hypothesis_met,
        pigeonhole_margin: pigeonhole_margin(t, p),
        core_vertices: core.vertices,
        found_in_core,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremal {
    pub value: usize,
    pub witness: Graph,
}

/// Maximum edge count of an `n`-vertex graph accepted by `is_free`.
///
/// `is_free` must be closed under deleting edges (true of every "contains no
/// member of a family" predicate). Graphs are grown one edge at a time and
/// deduplicated up to isomorphism at each level, so only free graphs are ever
/// extended. The witness is the first graph, in canonical order, on the top level.
pub fn exact_extremal_number<F>(n: usize, is_free: F) -> Result<Extremal>
where
    F: Fn(&Graph) -> bool + Sync,
{
    if n > MAX_EXACT_N {
        return capacity(format!("exact extremal numbers are limited to n <= {MAX_EXACT_N}"));
    }
    let empty = Graph::new(n);
    if !is_free(&empty) {
        return arg("the predicate rejects the edgeless graph");
    }
    let canon = |g: &Graph| canonical_form_with_bound(g, None, MAX_EXACT_N).expect("n is within the bound");
    let mut level: Vec<(Vec<u8>, Graph)> = vec![(canon(&empty), empty)];
    let mut value = 0;
    loop {
        let mut next: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut graphs: Vec<(Vec<u8>, Graph)> = Vec::new();
        for (_, g) in &level {
            for u in 0..n {
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let mut h = g.clone();
                    h.add_edge(u, v).expect("vertices in range");
                    let code = canon(&h);
                    if next.contains(&code) || !is_free(&h) {
                        continue;
                    }
                    next.insert(code.clone());
                    graphs.push((code, h));
                }
            }
        }
        if graphs.is_empty() {
            break;
        }
        graphs.sort_by(|x, y| x.0.cmp(&y.0));
        level = graphs;
        value += 1;
    }
    let witness = level.swap_remove(0).1;
    Ok(Extremal { value, witness })
}

/// Predicate "contains no member of `T^p`".
pub fn free_of_power(t: &RootedTree, p: usize) -> impl Fn(&Graph) -> bool + Sync + '_ {
    move |g| contains_member(g, t, p).is_none()
}

/// Predicate "contains no copy of `h`" (not necessarily induced).
pub fn free_of_graph(h: &Graph) -> impl Fn(&Graph) -> bool + Sync + '_ {
    move |g| !contains_subgraph(g, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub max_residual: f64,
}

/// Least-squares line through `(ln N, ln edges)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return arg("at least three points are needed");
    }
    for (i, &(n, e)) in points.iter().enumerate() {
        if !(n > 0.0 && e > 0.0 && n.is_finite() && e.is_finite()) {
            return arg(format!("point {i} = ({n}, {e}) is not positive"));
        }
        if points[..i].iter().any(|&(m, _)| m == n) {
            return arg(format!("N = {n} appears twice"));
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        max_residual,
    })
}
