//! Stable text renderings: JSON with sorted keys, CSV rows, exact rationals.

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::construction::{ConstructionReport, ThresholdBranch};
use crate::tree::DensityReport;

/// `"p/q"`, always with an explicit denominator.
pub fn ratio_string(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Pretty JSON with sorted object keys and a trailing newline.
pub fn to_stable_json<T: Serialize>(value: &T) -> String {
    // Round-tripping through `Value` sorts keys (its map is ordered).
    let value = serde_json::to_value(value).expect("report types serialise");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialise");
    out.push('\n');
    out
}

pub fn density_json(report: &DensityReport, balanced: bool) -> Value {
    json!({
        "rho_T": ratio_string(&report.rho_t),
        "balanced": balanced,
        "witness_subset": if balanced { None } else { report.worst_subset.clone() },
        "rho_S": report.rho_s.as_ref().map(ratio_string),
    })
}

pub fn report_json(report: &ConstructionReport) -> String {
    to_stable_json(report)
}

pub const REPORT_CSV_HEADER: &str = "a,b,r,q,N,s,d_full,d_used,seed,edge_count,expected_edges,\
threshold,threshold_branch,bad_sequences,removed_vertices,final_edge_count,max_count_after,\
certified_p,sampled,moment";

pub fn branch_name(branch: ThresholdBranch) -> &'static str {
    match branch {
        ThresholdBranch::Fixed => "fixed",
        ThresholdBranch::Gap => "gap",
        ThresholdBranch::Percentile => "percentile",
    }
}

pub fn report_csv_row(report: &ConstructionReport) -> String {
    let p = &report.params;
    let fields: Vec<String> = vec![
        p.a.to_string(),
        p.b.to_string(),
        p.r.to_string(),
        p.q.to_string(),
        p.n.to_string(),
        p.s.to_string(),
        p.d_full.to_string(),
        p.d_used.to_string(),
        p.seed.to_string(),
        report.edge_count.to_string(),
        report.expected_edges.to_string(),
        report.threshold.c.to_string(),
        branch_name(report.threshold.branch).to_string(),
        report.bad_sequences.to_string(),
        report.removed_vertices.to_string(),
        report.final_edge_count.to_string(),
        report.max_count_after.to_string(),
        report.certified_p.map_or(String::new(), |c| c.to_string()),
        report.sampled.to_string(),
        format!("{:.6}", report.moment),
    ];
    fields.join(",")
}
