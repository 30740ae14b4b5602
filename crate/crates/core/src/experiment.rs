//! Multi-`q`, multi-seed runs of the construction pipeline with a log-log fit
//! of edge counts against `N`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{round6, run_pipeline, ConstructionParams, ConstructionReport, ThresholdPolicy, DEFAULT_CAPACITY_N};
use crate::error::{arg, Result};
use crate::oracle::fit_exponent;
use crate::tree::build_t_ab;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub a: usize,
    pub b: usize,
    pub qlist: Vec<u64>,
    /// Seeds `base_seed .. base_seed + seeds` are run for every `q`.
    pub seeds: u64,
    pub base_seed: u64,
    pub threshold_policy: ThresholdPolicy,
    pub s: Option<usize>,
    pub d: Option<usize>,
    pub capacity_n: u64,
}

impl ExperimentConfig {
    pub fn new(a: usize, b: usize, qlist: Vec<u64>, seeds: u64, base_seed: u64) -> Self {
        ExperimentConfig {
            a,
            b,
            qlist,
            seeds,
            base_seed,
            threshold_policy: ThresholdPolicy::Auto,
            s: None,
            d: None,
            capacity_n: DEFAULT_CAPACITY_N,
        }
    }

    fn params(&self, q: u64, seed: u64) -> Result<ConstructionParams> {
        let mut params = ConstructionParams::unvalidated(build_t_ab(self.a, self.b)?, q, seed)
            .with_threshold(self.threshold_policy)
            .with_capacity(self.capacity_n);
        if let Some(s) = self.s {
            params = params.with_s(s);
        }
        if let Some(d) = self.d {
            params = params.with_d(d);
        }
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub runs: u64,
    pub mean_edges: f64,
    pub expected_edges: u64,
    pub mean_final_edges: f64,
    pub mean_removed_vertices: f64,
    pub mean_moment: f64,
    pub max_certified_p: Option<u64>,
    pub sampled_runs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    /// Slope of `ln(mean_edges)` against `ln N`; absent with fewer than three `q`.
    pub fitted_slope: Option<f64>,
    pub fit_max_residual: Option<f64>,
    /// The same fit on the pruned graphs' mean edge counts.
    pub fitted_slope_final: Option<f64>,
    pub target_slope: f64,
}

fn mean(values: impl Iterator<Item = f64>, count: u64) -> f64 {
    round6(values.sum::<f64>() / count as f64)
}

/// Runs every `(q, seed)` pair. Results do not depend on thread scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    if config.seeds == 0 {
        return arg("at least one seed is required");
    }
    if config.qlist.is_empty() {
        return arg("the q list is empty");
    }
    let mut rows = Vec::with_capacity(config.qlist.len());
    for &q in &config.qlist {
        let first = config.params(q, config.base_seed)?;
        let reports: Vec<ConstructionReport> = (0..config.seeds)
            .into_par_iter()
            .map(|i| {
                let params = config.params(q, config.base_seed.wrapping_add(i))?;
                run_pipeline(&params).map(|out| out.report)
            })
            .collect::<Result<_>>()?;
        let k = config.seeds;
        rows.push(ExperimentRow {
            q,
            n: first.side_size(),
            runs: k,
            mean_edges: mean(reports.iter().map(|r| r.edge_count as f64), k),
            expected_edges: first.expected_edges(),
            mean_final_edges: mean(reports.iter().map(|r| r.final_edge_count as f64), k),
            mean_removed_vertices: mean(reports.iter().map(|r| r.removed_vertices as f64), k),
            mean_moment: mean(reports.iter().map(|r| r.moment), k),
            max_certified_p: reports.iter().filter_map(|r| r.certified_p).max(),
            sampled_runs: reports.iter().filter(|r| r.sampled).count() as u64,
        });
    }
    let fit = |f: fn(&ExperimentRow) -> f64| {
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, f(r))).collect();
        fit_exponent(&points).ok()
    };
    let raw = fit(|r| r.mean_edges);
    let pruned = fit(|r| r.mean_final_edges);
    Ok(ExperimentSummary {
        config: config.clone(),
        fitted_slope: raw.map(|f| round6(f.slope)),
        fit_max_residual: raw.map(|f| round6(f.max_residual)),
        fitted_slope_final: pruned.map(|f| round6(f.slope)),
        target_slope: round6(2.0 - config.a as f64 / config.b as f64),
        rows,
    })
}

pub const EXPERIMENT_CSV_HEADER: &str =
    "q,N,mean_edges,expected_edges,fitted_slope,mean_final_edges,mean_removed_vertices,mean_moment";

pub fn experiment_csv(summary: &ExperimentSummary) -> String {
    let slope = summary.fitted_slope.map_or(String::new(), |s| format!("{s:.6}"));
    let mut out = String::from(EXPERIMENT_CSV_HEADER);
    out.push('\n');
    for row in &summary.rows {
        out.push_str(&format!(
            "{},{},{:.6},{},{},{:.6},{:.6},{:.6}\n",
            row.q,
            row.n,
            row.mean_edges,
            row.expected_edges,
            slope,
            row.mean_final_edges,
            row.mean_removed_vertices,
            row.mean_moment
        ));
    }
    out
}
