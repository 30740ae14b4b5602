//! Acceptance run: one line per criterion, nonzero exit on any failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turan_core::algebraic::exact_zero_probability;
use turan_core::construction::{build_random_graph, rooted_copy_profile, run_pipeline};
use turan_core::experiment::{run_experiment, ExperimentConfig};
use turan_core::family::{check_family_density, check_family_density_with_bound};
use turan_core::oracle::{exact_extremal_number, find_power_witness, free_of_graph, meets_edge_hypothesis, proof_constant};
use turan_core::{build_t_ab, contains_member, enumerate_power, ConstructionParams, Graph, RootedTree, ThresholdPolicy};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn leaf_counts(t: &RootedTree, a: usize) -> Vec<usize> {
    (0..a)
        .map(|v| t.graph().neighbors(v).iter().filter(|&&w| t.is_root(w)).count())
        .collect()
}

fn t_ab_golden() -> Outcome {
    for (b, leaves) in [(9, vec![2, 1, 1, 2]), (10, vec![2, 1, 2, 2])] {
        let t = build_t_ab(4, b).map_err(|e| e.to_string())?;
        ensure(t.unrooted() == vec![0, 1, 2, 3], "base path is not 0..4")?;
        ensure((0..3).all(|v| t.graph().has_edge(v, v + 1)), "base path edges missing")?;
        ensure(leaf_counts(&t, 4) == leaves, format!("T_{{4,{b}}} leaves {:?}", leaf_counts(&t, 4)))?;
        ensure(t.density().unwrap() == Ratio::new(b as u64, 4), "density")?;
    }
    Ok("leaf counts (2,1,1,2) and (2,1,2,2), densities 9/4 and 5/2".into())
}

fn t_ab_balanced() -> Outcome {
    let mut checked = 0;
    for a in 1..=6 {
        for b in a..=4 * a {
            let t = build_t_ab(a, b).map_err(|e| e.to_string())?;
            let (balanced, report) = t.is_balanced().map_err(|e| e.to_string())?;
            ensure(balanced, format!("T_{{{a},{b}}} unbalanced: {report:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} trees balanced"))
}

fn unbalanced_star() -> Outcome {
    let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
    let t = RootedTree::new(star, vec![1, 2]).unwrap();
    let (balanced, report) = t.is_balanced().unwrap();
    ensure(!balanced, "star reported balanced")?;
    ensure(report.rho_t == Ratio::new(3, 2), "rho_T != 3/2")?;
    ensure(report.rho_s == Some(Ratio::from_integer(1)), "witness density != 1")?;
    let (holds, violator) = check_family_density(&t, 2).unwrap();
    ensure(!holds, "no violator for s = 2")?;
    let h = violator.ok_or("violator missing")?;
    ensure(h.edge_count() == 4 && h.vertex_count() == 5, format!("violator has {} vertices, {} edges", h.vertex_count(), h.edge_count()))?;
    // Both copies use the same centre: one vertex adjacent to both roots.
    let centres = (0..h.vertex_count())
        .filter(|&v| h.roots.iter().all(|&r| h.union_graph.has_edge(v, r)))
        .count();
    ensure(centres == 1, "violator does not share its centre")?;
    ensure(h.is_valid_for(&t), "violator is not a union of copies")?;
    Ok("witness density 1 < 3/2; shared-centre violator e(H) = 4 < 9/2".into())
}

fn rooted_path_square() -> Outcome {
    let t = RootedTree::path_with_rooted_ends(3);
    let members = enumerate_power(&t, 2).map_err(|e| e.to_string())?;
    let mut shapes: Vec<(usize, usize)> = members.iter().map(|m| (m.vertex_count(), m.edge_count())).collect();
    shapes.sort_unstable();
    ensure(shapes.len() == 4, format!("{} classes", shapes.len()))?;
    ensure(shapes.contains(&(6, 6)) && shapes.contains(&(4, 5)), format!("shapes {shapes:?}"))?;
    Ok(format!("classes {shapes:?}"))
}

fn family_density() -> Outcome {
    let trees: Vec<RootedTree> = common::rooted_trees(5)
        .into_iter()
        .filter(|t| t.is_balanced().unwrap().0)
        .collect();
    let next = AtomicUsize::new(0);
    let failures = Mutex::new(Vec::new());
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(t) = trees.get(i) else { break };
                match check_family_density_with_bound(t, 3, 20) {
                    Ok((true, _)) => {}
                    Ok((false, v)) => failures.lock().unwrap().push(format!("{t:?}: {v:?}")),
                    Err(e) => failures.lock().unwrap().push(format!("{t:?}: {e}")),
                }
            });
        }
    });
    let failures = failures.into_inner().unwrap();
    ensure(failures.is_empty(), failures.join("; "))?;
    Ok(format!("{} balanced trees, s <= 3", trees.len()))
}

fn vanishing_probability() -> Outcome {
    let one = exact_zero_probability(1, 1, 3, &[vec![1]]).map_err(|e| e.to_string())?;
    let two = exact_zero_probability(1, 1, 3, &[vec![0], vec![2]]).map_err(|e| e.to_string())?;
    ensure(one == Ratio::new(1, 3), format!("m = 1 gives {one}"))?;
    ensure(two == Ratio::new(1, 9), format!("m = 2 gives {two}"))?;
    Ok(format!("m = 1: {one}, m = 2: {two}"))
}

fn edge_statistics() -> Outcome {
    let mut lines = Vec::new();
    for (a, b, q) in [(1, 1, 11), (1, 2, 5), (2, 1, 7)] {
        let seeds = 50;
        let mut total = 0.0;
        let mut pairs = 0.0;
        for seed in 0..seeds {
            let params = ConstructionParams::for_t_ab(a, b, q, seed).map_err(|e| e.to_string())?;
            pairs = (params.side_size() * params.side_size()) as f64;
            total += build_random_graph(&params).map_err(|e| e.to_string())?.edge_count() as f64;
        }
        let mean = total / seeds as f64;
        let expected = (q as f64).powi(2 * b as i32 - a as i32);
        let p = (q as f64).powi(-(a as i32));
        let sigma = (pairs * p * (1.0 - p) / seeds as f64).sqrt();
        ensure((mean - expected).abs() <= 3.0 * sigma, format!("({a},{b},{q}) mean {mean} vs {expected}, sigma {sigma:.3}"))?;
        lines.push(format!("({a},{b},{q}) {mean:.2}/{expected}"));
    }
    Ok(lines.join(", "))
}

fn pruning_certification() -> Outcome {
    let t = build_t_ab(1, 2).unwrap();
    let mut runs = 0;
    for q in [5, 7] {
        for seed in 0..5 {
            for policy in [ThresholdPolicy::Auto, ThresholdPolicy::Fixed(1)] {
                let params = ConstructionParams::for_t_ab(1, 2, q, seed).unwrap().with_threshold(policy);
                let out = run_pipeline(&params).map_err(|e| e.to_string())?;
                let c = out.report.threshold.c;
                let label = format!("q = {q}, seed {seed}, {policy:?}");
                ensure(rooted_copy_profile(&out.pruned, &t).max_count() <= c, format!("{label}: tuple above threshold"))?;
                ensure(contains_member(&out.pruned, &t, c as usize + 1).is_none(), format!("{label}: member of T^(c+1) found"))?;
                // Members of T^p are K_{2,p}; a pair with more than c common
                // neighbours is exactly a member of T^(c+1).
                ensure(u64::from(common::max_common_neighbours(&out.pruned)) <= c, format!("{label}: scanner disagrees"))?;
                if c == 1 {
                    ensure(!common::has_four_cycle(&out.pruned), format!("{label}: 4-cycle survived"))?;
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} pruned graphs certified"))
}

fn slope_fit() -> Outcome {
    let config = ExperimentConfig::new(1, 2, vec![3, 5, 7, 11], 50, 0);
    let summary = run_experiment(&config).map_err(|e| e.to_string())?;
    let slope = summary.fitted_slope.ok_or("no slope")?;
    ensure((slope - 1.5).abs() <= 0.15, format!("slope {slope:.4}"))?;
    let pruned = summary.fitted_slope_final.map_or("n/a".into(), |s| format!("{s:.4}"));
    Ok(format!("slope {slope:.4} (after pruning {pruned})"))
}

fn oracle_cross_checks() -> Outcome {
    let c4 = Graph::cycle(4);
    for (n, value) in [(4, 4), (5, 6)] {
        let result = exact_extremal_number(n, free_of_graph(&c4)).map_err(|e| e.to_string())?;
        ensure(result.value == value, format!("ex({n}, C4) = {}", result.value))?;
        ensure(result.witness.edge_count() == value, "witness edge count")?;
        ensure(!common::has_four_cycle(&result.witness), format!("ex({n}) witness has a 4-cycle"))?;
    }
    let trees: Vec<RootedTree> = common::rooted_trees(4)
        .into_iter()
        .filter(|t| t.vertex_count() <= 5 && t.is_balanced().unwrap().0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut hosts = Vec::new();
    for n in [5, 8, 12, 18, 26, 34, 40] {
        hosts.push(Graph::complete(n));
        hosts.push(Graph::complete_bipartite(n / 2, n - n / 2));
        for _ in 0..4 {
            let p = rng.gen_range(0.6..0.98);
            hosts.push(common::random_graph(n, p, &mut rng));
        }
    }
    let mut qualifying = 0;
    for t in &trees {
        for p in 1..=3 {
            let c = proof_constant(t, p);
            for g in &hosts {
                if !meets_edge_hypothesis(t, g.n(), g.edge_count(), c) {
                    continue;
                }
                qualifying += 1;
                let search = find_power_witness(g, t, p).map_err(|e| e.to_string())?;
                let w = search.witness.ok_or_else(|| format!("no witness: {t:?}, p = {p}, n = {}", g.n()))?;
                ensure(w.is_valid(g, t, p), "invalid witness")?;
            }
        }
    }
    ensure(qualifying >= 100, format!("only {qualifying} instances met the hypothesis"))?;
    Ok(format!("ex(4,C4) = 4, ex(5,C4) = 6; {qualifying} dense instances all witnessed"))
}

fn determinism() -> Outcome {
    let run = |dir: &std::path::Path| -> Result<(Vec<u8>, Vec<u8>), String> {
        let status = Command::new(env!("CARGO_BIN_EXE_turan"))
            .args(["experiment", "--a", "1", "--b", "2", "--qlist", "3,5,7", "--seeds", "10", "--out"])
            .arg(dir)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), format!("experiment exited with {status}"))?;
        let csv = std::fs::read(dir.join("experiment.csv")).map_err(|e| e.to_string())?;
        let json = std::fs::read(dir.join("experiment.json")).map_err(|e| e.to_string())?;
        Ok((csv, json))
    };
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    let x = run(first.path())?;
    let y = run(second.path())?;
    ensure(x.0 == y.0, "CSV differs")?;
    ensure(x.1 == y.1, "JSON differs")?;
    Ok(format!("{} + {} identical bytes", x.0.len(), x.1.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("T_{4,9} and T_{4,10} golden", t_ab_golden, Duration::from_millis(50)),
        ("T_{a,b} balanced, a <= 6", t_ab_balanced, Duration::from_secs(60)),
        ("unbalanced star and its violator", unbalanced_star, Duration::from_secs(1)),
        ("square of the rooted 3-path", rooted_path_square, Duration::from_secs(1)),
        ("family density, s <= 3", family_density, Duration::from_secs(300)),
        ("exact vanishing probability", vanishing_probability, Duration::from_secs(1)),
        ("edge-count statistics", edge_statistics, Duration::from_secs(120)),
        ("pruning certification", pruning_certification, Duration::from_secs(120)),
        ("slope fit", slope_fit, Duration::from_secs(300)),
        ("oracle cross-checks", oracle_cross_checks, Duration::from_secs(600)),
        ("experiment determinism", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
