//! The random algebraic construction: a bipartite graph on two copies of
//! `F_q^b` whose edges are the common zeros of `a` random polynomials,
//! followed by copy profiling and pruning of heavy root tuples.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{
    check_zero_probability_preconditions, is_prime, monomials, sample_polynomial, MultiPolynomial,
};
use crate::embed::EmbeddingPlan;
use crate::error::{arg, capacity, Error, Result};
use crate::family::{contains_member, for_each_tuple};
use crate::graph::Graph;
use crate::tree::{build_t_ab, RootedTree};

/// Default bound on `N = q^b`, the size of each side.
pub const DEFAULT_CAPACITY_N: u64 = 4096;
/// Default cap on the polynomial degree actually used.
pub const DEFAULT_DEGREE_CAP: usize = 8;
/// Above this many root tuples the profile is sampled.
pub const EXHAUSTIVE_TUPLE_LIMIT: u64 = 10_000_000;
pub const SAMPLED_TUPLES: u64 = 1_000_000;

/// Nonzero per-tuple counts.
type TupleCounts = Vec<(Vec<usize>, u64)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdPolicy {
    Fixed(u64),
    Auto,
}

#[derive(Debug, Clone)]
pub struct ConstructionParams {
    pub tree: RootedTree,
    pub q: u64,
    /// Moment order; defaults to `2 b r`.
    pub s: usize,
    /// Degree bound of the sampled polynomials.
    pub d: usize,
    pub seed: u64,
    pub threshold_policy: ThresholdPolicy,
    pub capacity_n: u64,
}

impl ConstructionParams {
    /// Parameters with the default moment order and degree for `tree`.
    pub fn new(tree: RootedTree, q: u64, seed: u64) -> Result<Self> {
        let params = Self::unvalidated(tree, q, seed);
        params.validate()?;
        Ok(params)
    }

    /// Like [`ConstructionParams::new`] but defers validation, so the
    /// capacity can be raised first. The pipeline validates on entry.
    pub fn unvalidated(tree: RootedTree, q: u64, seed: u64) -> Self {
        let b = tree.edge_count();
        let s = 2 * b * tree.root_count();
        ConstructionParams {
            d: default_degree(s, b, DEFAULT_DEGREE_CAP),
            tree,
            q,
            s,
            seed,
            threshold_policy: ThresholdPolicy::Auto,
            capacity_n: DEFAULT_CAPACITY_N,
        }
    }

    /// Parameters for the balanced tree `T_{a,b}`.
    pub fn for_t_ab(a: usize, b: usize, q: u64, seed: u64) -> Result<Self> {
        Self::new(build_t_ab(a, b)?, q, seed)
    }

    /// Sets the moment order and resets `d` to its default for it.
    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self.d = default_degree(s, self.b(), DEFAULT_DEGREE_CAP);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_threshold(mut self, threshold: ThresholdPolicy) -> Self {
        self.threshold_policy = threshold;
        self
    }

    pub fn with_capacity(mut self, capacity_n: u64) -> Self {
        self.capacity_n = capacity_n;
        self
    }

    /// Number of unrooted tree vertices, which is also the number of polynomials.
    pub fn a(&self) -> usize {
        self.tree.unrooted_count()
    }

    /// Number of tree edges, which is also the dimension of each side.
    pub fn b(&self) -> usize {
        self.tree.edge_count()
    }

    pub fn r(&self) -> usize {
        self.tree.root_count()
    }

    /// `N = q^b` (saturating).
    pub fn side_size(&self) -> u64 {
        (self.q as u128)
            .checked_pow(self.b() as u32)
            .map_or(u64::MAX, |n| n.min(u128::from(u64::MAX)) as u64)
    }

    /// The degree `s b` the existence argument calls for.
    pub fn full_degree(&self) -> usize {
        self.s * self.b()
    }

    /// Expected edge count `q^(2b - a)`.
    pub fn expected_edges(&self) -> u64 {
        self.q.pow((2 * self.b() - self.a()) as u32)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.q) {
            return arg(format!("q = {} is not prime", self.q));
        }
        if self.b() == 0 {
            return arg("the tree needs at least one edge");
        }
        let n = self.side_size();
        if n > self.capacity_n {
            return capacity(format!(
                "N = q^b = {n} exceeds the capacity {}",
                self.capacity_n
            ));
        }
        Ok(())
    }
}

/// `min(s b, cap)`, raised to 1 so that distinct pairs stay pairwise independent.
pub fn default_degree(s: usize, b: usize, cap: usize) -> usize {
    (s * b).min(cap).max(1)
}

/// Coordinates of point `index` of `F_q^b` in lexicographic order.
pub fn point_coordinates(index: u64, q: u64, b: usize) -> Vec<u64> {
    let mut coords = vec![0u64; b];
    let mut rest = index;
    for slot in coords.iter_mut().rev() {
        *slot = rest % q;
        rest /= q;
    }
    coords
}

/// Samples the `a` polynomials in `2b` variables, in order, from the seeded stream.
pub fn sample_edge_polynomials(params: &ConstructionParams) -> Result<Vec<MultiPolynomial>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    (0..params.a())
        .map(|_| sample_polynomial(2 * params.b(), params.d, params.q, &mut rng))
        .collect()
}

pub fn build_random_graph(params: &ConstructionParams) -> Result<Graph> {
    params.validate()?;
    let polys = sample_edge_polynomials(params)?;
    Ok(graph_from_polynomials(&polys, params.b(), params.q))
}

/// Bipartite graph on `U = 0..N` and `V = N..2N` (both enumerating `F_q^b`
/// lexicographically) with `u ~ v` iff every polynomial vanishes at `(u, v)`.
///
/// Each polynomial is split as `f(u, v) = sum_alpha u^alpha g_alpha(v)`, so a
/// pair costs one pass over the `u`-monomials.
pub fn graph_from_polynomials(polys: &[MultiPolynomial], b: usize, q: u64) -> Graph {
    let n = q.pow(b as u32) as usize;
    let d = polys.iter().map(MultiPolynomial::degree_bound).max().unwrap_or(0);
    let basis = monomials(b, d);
    let index: HashMap<&[u32], usize> = basis.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();

    // powers[p][m] = monomial m evaluated at point p.
    let powers: Vec<Vec<u64>> = (0..n as u64)
        .map(|p| {
            let x = point_coordinates(p, q, b);
            basis
                .iter()
                .map(|exps| {
                    x.iter().zip(exps).fold(1 % q, |acc, (&xi, &e)| {
                        (0..e).fold(acc, |acc, _| acc * xi % q)
                    })
                })
                .collect()
        })
        .collect();

    // partial[f][alpha][v] = g_alpha(v) for polynomial f.
    let partial: Vec<Vec<Vec<u64>>> = polys
        .iter()
        .map(|f| {
            let mut coeff = vec![vec![0u64; basis.len()]; basis.len()];
            for term in f.terms() {
                let alpha = index[&term.exps[..b]];
                let beta = index[&term.exps[b..]];
                coeff[alpha][beta] = term.coef;
            }
            coeff
                .iter()
                .map(|row| {
                    (0..n)
                        .map(|v| {
                            row.iter()
                                .zip(&powers[v])
                                .fold(0u64, |acc, (&c, &pw)| (acc + c * pw) % q)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            (0..n)
                .filter(|&v| {
                    partial.iter().all(|g| {
                        g.iter()
                            .zip(&powers[u])
                            .fold(0u64, |acc, (gv, &pw)| (acc + pw * gv[v]) % q)
                            == 0
                    })
                })
                .collect()
        })
        .collect();

    let sides = (0..2 * n).map(|v| u8::from(v >= n)).collect();
    let mut g = Graph::new(2 * n)
        .with_bipartition(sides)
        .expect("edgeless graph accepts any bipartition");
    for (u, row) in rows.iter().enumerate() {
        for &v in row {
            g.add_edge(u, n + v).expect("cross edge");
        }
    }
    g
}

/// Rooted copy counts over root tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyProfile {
    /// Tuples with a nonzero count, in enumeration order; absent tuples have count 0.
    pub counts: Vec<(Vec<usize>, u64)>,
    /// Number of tuples with each count, including zero.
    pub histogram: BTreeMap<u64, u64>,
    pub tuples: u64,
    pub sampled: bool,
}

impl CopyProfile {
    pub fn max_count(&self) -> u64 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    pub fn count_of(&self, tuple: &[usize]) -> u64 {
        self.counts
            .iter()
            .find(|(t, _)| t == tuple)
            .map_or(0, |(_, c)| *c)
    }

    /// Mean of `count^s` over all profiled tuples.
    pub fn moment(&self, s: u32) -> f64 {
        if self.tuples == 0 {
            return 0.0;
        }
        let total: f64 = self
            .histogram
            .iter()
            .map(|(&c, &k)| (c as f64).powi(s as i32) * k as f64)
            .sum();
        total / self.tuples as f64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    pub exhaustive_limit: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            exhaustive_limit: EXHAUSTIVE_TUPLE_LIMIT,
            samples: SAMPLED_TUPLES,
            seed: 0,
        }
    }
}

fn falling(n: u64, k: usize) -> u64 {
    (0..k as u64).fold(1u64, |acc, i| acc.saturating_mul(n.saturating_sub(i)))
}

pub fn rooted_copy_profile(g: &Graph, t: &RootedTree) -> CopyProfile {
    rooted_copy_profile_with(g, t, &ProfileOptions::default())
}

/// Counts rooted copies of `t` on every ordered tuple of distinct vertices.
///
/// When `g` carries a bipartition, tuples are restricted to placements where
/// roots in the same colour class of `t` share a side of `g` (both
/// orientations). Above `exhaustive_limit` tuples a uniform sample is used.
pub fn rooted_copy_profile_with(g: &Graph, t: &RootedTree, options: &ProfileOptions) -> CopyProfile {
    let plan = EmbeddingPlan::new(t);
    let r = t.root_count();
    let tree_sides = t.sides();
    let root_class: Vec<u8> = t.roots().iter().map(|&x| tree_sides[x]).collect();

    let orientations: Vec<Option<u8>> = match g.bipartition() {
        Some(_) if r > 0 => vec![Some(0), Some(1)],
        _ => vec![None],
    };
    let allowed = |flip: Option<u8>, i: usize, v: usize| match (flip, g.bipartition()) {
        (Some(f), Some(sides)) => sides[v] == root_class[i] ^ f,
        _ => true,
    };
    let total: u64 = match g.bipartition() {
        Some(sides) if r > 0 => {
            let left = sides.iter().filter(|&&s| s == 0).count() as u64;
            let right = g.n() as u64 - left;
            let k0 = root_class.iter().filter(|&&c| c == 0).count();
            let k1 = r - k0;
            falling(left, k0).saturating_mul(falling(right, k1))
                + falling(right, k0).saturating_mul(falling(left, k1))
        }
        _ => falling(g.n() as u64, r),
    };

    let mut histogram = BTreeMap::new();
    let mut counts = Vec::new();
    if total > options.exhaustive_limit {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let side_members: Vec<Vec<usize>> = match g.bipartition() {
            Some(sides) => (0..2u8)
                .map(|s| (0..g.n()).filter(|&v| sides[v] == s).collect())
                .collect(),
            None => vec![(0..g.n()).collect(), (0..g.n()).collect()],
        };
        for _ in 0..options.samples {
            let flip = rng.gen_range(0..2u8);
            let mut tuple: Vec<usize> = Vec::with_capacity(r);
            for i in 0..r {
                let pool = if g.bipartition().is_some() {
                    &side_members[usize::from(root_class[i] ^ flip)]
                } else {
                    &side_members[0]
                };
                loop {
                    let v = pool[rng.gen_range(0..pool.len())];
                    if !tuple.contains(&v) {
                        tuple.push(v);
                        break;
                    }
                }
            }
            let c = plan.count(g, &tuple, u64::MAX);
            *histogram.entry(c).or_insert(0) += 1;
            if c > 0 {
                counts.push((tuple, c));
            }
        }
        return CopyProfile {
            counts,
            histogram,
            tuples: options.samples,
            sampled: true,
        };
    }

    for flip in orientations {
        let first: Vec<usize> = if r == 0 {
            vec![usize::MAX]
        } else {
            (0..g.n()).filter(|&v| allowed(flip, 0, v)).collect()
        };
        let chunks: Vec<(TupleCounts, u64)> = first
            .into_par_iter()
            .map(|v| {
                let mut prefix = if v == usize::MAX { Vec::new() } else { vec![v] };
                let mut found = Vec::new();
                let mut zeros = 0u64;
                for_each_tuple(g.n(), r, &|i, w| allowed(flip, i, w), &mut prefix, &mut |tuple| {
                    let c = plan.count(g, tuple, u64::MAX);
                    if c > 0 {
                        found.push((tuple.to_vec(), c));
                    } else {
                        zeros += 1;
                    }
                    true
                });
                (found, zeros)
            })
            .collect();
        for (found, zeros) in chunks {
            if zeros > 0 {
                *histogram.entry(0).or_insert(0) += zeros;
            }
            for (tuple, c) in found {
                *histogram.entry(c).or_insert(0) += 1;
                counts.push((tuple, c));
            }
        }
    }
    CopyProfile {
        counts,
        histogram,
        tuples: total,
        sampled: false,
    }
}

/// Tuples whose count exceeds `c`.
pub fn detect_bad_sequences(profile: &CopyProfile, c: u64) -> Vec<Vec<usize>> {
    profile
        .counts
        .iter()
        .filter(|(_, count)| *count > c)
        .map(|(tuple, _)| tuple.clone())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdBranch {
    Fixed,
    /// No tuple count falls strictly between `c` and `q/2`.
    Gap,
    /// The counts leave no room below `q/2`; `c` is the 99th percentile.
    Percentile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub c: u64,
    pub branch: ThresholdBranch,
}

/// Picks the threshold from the gap the small-or-large dichotomy predicts:
/// the largest count below `q/2` is the candidate, accepted when at least one
/// integer lies strictly between it and `q/2`. Otherwise falls back to the
/// nearest-rank 99th percentile of the counts.
pub fn auto_threshold(histogram: &BTreeMap<u64, u64>, q: u64) -> Threshold {
    // k < q/2  <=>  2k < q
    let candidate = histogram
        .keys()
        .copied()
        .filter(|&k| 2 * k < q)
        .max()
        .unwrap_or(0);
    if 2 * (candidate + 1) < q {
        return Threshold {
            c: candidate,
            branch: ThresholdBranch::Gap,
        };
    }
    let total: u64 = histogram.values().sum();
    let rank = (99 * total).div_ceil(100).max(1);
    let mut seen = 0;
    let mut c = 0;
    for (&k, &count) in histogram {
        seen += count;
        if seen >= rank {
            c = k;
            break;
        }
    }
    Threshold {
        c,
        branch: ThresholdBranch::Percentile,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    /// Same vertex numbering as the input; removed vertices are isolated.
    pub graph: Graph,
    pub removed: Vec<usize>,
}

/// Removes the lowest-indexed vertex of every bad tuple that has not already
/// lost a vertex in this pass.
pub fn prune(g: &Graph, bad: &[Vec<usize>]) -> Pruned {
    let mut removed = BTreeSet::new();
    for tuple in bad {
        if tuple.iter().any(|v| removed.contains(v)) {
            continue;
        }
        if let Some(&lowest) = tuple.iter().min() {
            removed.insert(lowest);
        }
    }
    Pruned {
        graph: g.isolate_vertices(&removed),
        removed: removed.into_iter().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub a: usize,
    pub b: usize,
    pub r: usize,
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub s: usize,
    pub d_full: usize,
    pub d_used: usize,
    pub seed: u64,
    pub threshold_policy: ThresholdPolicy,
}

/// Everything needed to reproduce and audit one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub params: ParamsEcho,
    pub edge_count: u64,
    pub expected_edges: u64,
    pub copy_profile: BTreeMap<u64, u64>,
    pub tuples_profiled: u64,
    pub sampled: bool,
    pub threshold: Threshold,
    pub bad_sequences: u64,
    pub removed_vertices: u64,
    pub final_edge_count: u64,
    /// Largest rooted copy count left after pruning.
    pub max_count_after: u64,
    /// Smallest `p` for which the pruned graph is verified `T^p`-free; absent
    /// when the profile was sampled.
    pub certified_p: Option<u64>,
    /// Mean of `|C|^s` over profiled tuples, rounded to 6 decimals.
    pub moment: f64,
    /// Whether `(q, m = s v(T), d)` meet the exact vanishing-probability conditions.
    pub zero_probability_preconditions: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub report: ConstructionReport,
    pub graph: Graph,
    pub pruned: Graph,
    pub removed: Vec<usize>,
}

pub(crate) fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn run_pipeline(params: &ConstructionParams) -> Result<PipelineOutput> {
    params.validate()?;
    let t = &params.tree;
    if t.root_count() == 0 {
        return arg("the construction needs at least one root");
    }
    let (balanced, density) = t.is_balanced()?;
    if !balanced {
        return Err(Error::Unbalanced {
            witness: density.worst_subset.unwrap_or_default(),
        });
    }

    let graph = build_random_graph(params)?;
    let options = ProfileOptions {
        seed: params.seed.wrapping_add(1),
        ..ProfileOptions::default()
    };
    let profile = rooted_copy_profile_with(&graph, t, &options);
    let threshold = match params.threshold_policy {
        ThresholdPolicy::Fixed(c) => Threshold {
            c,
            branch: ThresholdBranch::Fixed,
        },
        ThresholdPolicy::Auto => auto_threshold(&profile.histogram, params.q),
    };
    let bad = detect_bad_sequences(&profile, threshold.c);
    let Pruned { graph: pruned, removed } = prune(&graph, &bad);

    let after = rooted_copy_profile_with(&pruned, t, &options);
    let max_after = after.max_count();
    let certified_p = if profile.sampled {
        None
    } else {
        let p = max_after + 1;
        contains_member(&pruned, t, p as usize).is_none().then_some(p)
    };

    let m = (params.s * t.vertex_count()) as u64;
    let report = ConstructionReport {
        params: ParamsEcho {
            a: params.a(),
            b: params.b(),
            r: params.r(),
            q: params.q,
            n: params.side_size(),
            s: params.s,
            d_full: params.full_degree(),
            d_used: params.d,
            seed: params.seed,
            threshold_policy: params.threshold_policy,
        },
        edge_count: graph.edge_count() as u64,
        expected_edges: params.expected_edges(),
        copy_profile: profile.histogram.clone(),
        tuples_profiled: profile.tuples,
        sampled: profile.sampled,
        threshold,
        bad_sequences: bad.len() as u64,
        removed_vertices: removed.len() as u64,
        final_edge_count: pruned.edge_count() as u64,
        max_count_after: max_after,
        certified_p,
        moment: round6(profile.moment(params.s as u32)),
        zero_probability_preconditions: check_zero_probability_preconditions(params.q, m, params.d as u64),
    };
    Ok(PipelineOutput {
        report,
        graph,
        pruned,
        removed,
    })
}
