//! Canonical forms of small vertex-coloured graphs.
//!
//! Individualisation-refinement: colour refinement to an equitable ordered
//! partition, then branching on every vertex of the first non-singleton cell.
//! Each discrete leaf yields a relabelling; the canonical form is the
//! lexicographically smallest encoding over all leaves. Branches on twin
//! vertices are skipped since swapping twins is an automorphism that fixes the
//! current partition.

use crate::error::{capacity, Result};
use crate::graph::Graph;

/// Default vertex limit for [`canonical_form`].
pub const DEFAULT_CANON_BOUND: usize = 16;

/// Hard limit imposed by the bit-mask representation.
pub(crate) const MAX_CANON_VERTICES: usize = 64;

/// Canonical byte string of `g`, optionally with a set of distinguished
/// vertices that isomorphisms must preserve (as a set).
pub fn canonical_form(g: &Graph, colored: Option<&[usize]>) -> Result<Vec<u8>> {
    canonical_form_with_bound(g, colored, DEFAULT_CANON_BOUND)
}

pub fn canonical_form_with_bound(
    g: &Graph,
    colored: Option<&[usize]>,
    bound: usize,
) -> Result<Vec<u8>> {
    let mut colors = vec![0u32; g.n()];
    if let Some(set) = colored {
        for &v in set {
            if v < g.n() {
                colors[v] = 1;
            }
        }
    }
    canonical_form_colored(g, &colors, bound)
}

/// Canonical form respecting an arbitrary vertex colouring.
pub fn canonical_form_colored(g: &Graph, colors: &[u32], bound: usize) -> Result<Vec<u8>> {
    let n = g.n();
    if n > bound.min(MAX_CANON_VERTICES) {
        return capacity(format!(
            "{n} vertices exceeds the canonical-form bound {}",
            bound.min(MAX_CANON_VERTICES)
        ));
    }
    assert_eq!(colors.len(), n, "one colour per vertex");
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();

    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let cells: Vec<Vec<usize>> = distinct
        .iter()
        .map(|&c| (0..n).filter(|&v| colors[v] == c).collect())
        .collect();

    let search = Search { adj: &adj, colors };
    let mut best: Option<Vec<u8>> = None;
    search.descend(refine(&adj, cells), &mut best);
    Ok(best.unwrap_or_else(|| encode(&adj, colors, &[])))
}

struct Search<'a> {
    adj: &'a [u64],
    colors: &'a [u32],
}

impl Search<'_> {
    fn descend(&self, cells: Vec<Vec<usize>>, best: &mut Option<Vec<u8>>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let code = encode(self.adj, self.colors, &order);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            self.descend(refine(self.adj, next), best);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let mask = !((1u64 << u) | (1u64 << v));
        self.adj[u] & mask == self.adj[v] & mask
    }
}

/// Splits cells by neighbour counts into every current cell until stable.
/// Sub-cells replace their parent in place, ordered by signature, so the
/// result is invariant under relabelling.
fn refine(adj: &[u64], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u64> = cells
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        let mut split = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks.iter().map(|&m| (adj[v] & m).count_ones()).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
            split |= keyed[0].0 != keyed[keyed.len() - 1].0;
        }
        cells = next;
        if !split {
            return cells;
        }
    }
}

/// `[n, colours in order..., upper-triangle adjacency bits packed MSB first]`.
fn encode(adj: &[u64], colors: &[u32], order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut out = Vec::with_capacity(1 + 4 * n + n * n / 16 + 1);
    out.push(n as u8);
    for &v in order {
        out.extend_from_slice(&colors[v].to_be_bytes());
    }
    let mut byte = 0u8;
    let mut bits = 0;
    for i in 0..n {
        for j in i + 1..n {
            byte = (byte << 1) | u8::from(adj[order[i]] & (1 << order[j]) != 0);
            bits += 1;
            if bits == 8 {
                out.push(byte);
                byte = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push(byte << (8 - bits));
    }
    out
}
