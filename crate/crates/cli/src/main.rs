use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use turan_core::construction::{run_pipeline, DEFAULT_CAPACITY_N};
use turan_core::experiment::{experiment_csv, run_experiment, ExperimentConfig};
use turan_core::family::{check_family_density_with_bound, enumerate_power_with_bound, disjoint_power, DEFAULT_FAMILY_BOUND};
use turan_core::io::{parse_edge_list, parse_rooted_tree, to_dot, write_edge_list, write_rooted_tree};
use turan_core::oracle::{exact_extremal_number, find_power_witness, free_of_graph, free_of_power};
use turan_core::report::{density_json, report_csv_row, report_json, to_stable_json, REPORT_CSV_HEADER};
use turan_core::tree::DEFAULT_BALANCE_BOUND;
use turan_core::{build_t_ab, ConstructionParams, Error, RootedTree, ThresholdPolicy};

/// Environment variable overriding the default bound on `N = q^b`.
const CAPACITY_ENV: &str = "RE_CAPACITY_N";

#[derive(Parser)]
#[command(name = "turan", version, about = "Balanced rooted trees, power families and random algebraic constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and inspect rooted trees.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Power families of a rooted tree.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// One run of the random algebraic construction.
    Construct(ConstructArgs),
    /// Multi-q, multi-seed runs with an exponent fit.
    Experiment(ExperimentArgs),
    /// Brute-force ground truth.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Write the tree T_{a,b}.
    Build {
        a: usize,
        b: usize,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density and balance report for a tree file.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BALANCE_BOUND)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// All members of T^p up to isomorphism.
    Enumerate {
        tree: PathBuf,
        p: usize,
        #[arg(long, default_value_t = DEFAULT_FAMILY_BOUND)]
        bound: usize,
    },
    /// Check e(H) >= rho_T (|H| - |R|) for every member of T^p, p <= s.
    Density {
        tree: PathBuf,
        s: usize,
        #[arg(long, default_value_t = DEFAULT_FAMILY_BOUND)]
        bound: usize,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Moment order (default 2br).
    #[arg(long)]
    s: Option<usize>,
    /// Polynomial degree (default min(sb, 8), at least 1).
    #[arg(long)]
    d: Option<usize>,
    /// `auto` or a fixed integer.
    #[arg(long, default_value = "auto", value_parser = parse_threshold)]
    threshold: ThresholdPolicy,
    #[arg(long)]
    out: PathBuf,
    /// Also write DOT files.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    qlist: Vec<u64>,
    /// Seeds per q.
    #[arg(long, default_value_t = 50)]
    seeds: u64,
    /// First seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value = "auto", value_parser = parse_threshold)]
    threshold: ThresholdPolicy,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exact extremal number for n <= 8.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        p: usize,
        /// Forbid only the single graph whose copies share just the roots.
        #[arg(long)]
        disjoint: bool,
    },
    /// Search a graph for p rooted copies on a common root tuple.
    Witness {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        p: usize,
    },
}

fn parse_threshold(s: &str) -> Result<ThresholdPolicy, String> {
    if s == "auto" {
        return Ok(ThresholdPolicy::Auto);
    }
    s.parse()
        .map(ThresholdPolicy::Fixed)
        .map_err(|_| format!("`{s}` is neither `auto` nor a nonnegative integer"))
}

fn capacity_n() -> anyhow::Result<u64> {
    match std::env::var(CAPACITY_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("{CAPACITY_ENV}={v} is not an integer")).into()),
        Err(_) => Ok(DEFAULT_CAPACITY_N),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read_tree(path: &Path) -> anyhow::Result<RootedTree> {
    Ok(parse_rooted_tree(&read(path)?)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Tree(TreeCommand::Build { a, b, out }) => {
            let text = write_rooted_tree(&build_t_ab(a, b)?);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Tree(TreeCommand::Check { file, bound }) => {
            let t = read_tree(&file)?;
            let (balanced, report) = t.is_balanced_with_bound(bound)?;
            print!("{}", to_stable_json(&density_json(&report, balanced)));
        }
        Command::Family(FamilyCommand::Enumerate { tree, p, bound }) => {
            let t = read_tree(&tree)?;
            let members = enumerate_power_with_bound(&t, p, bound)?;
            let rho = t.density()?;
            let mut density_ok = true;
            for (i, m) in members.iter().enumerate() {
                let free = (m.vertex_count() - t.root_count()) as u64;
                density_ok &= m.edge_count() as u64 * rho.denom() >= rho.numer() * free;
                let roots: Vec<String> = m.roots.iter().map(usize::to_string).collect();
                println!("# class {i}: {} vertices, {} edges", m.vertex_count(), m.edge_count());
                print!("{}roots: {}\n\n", write_edge_list(&m.union_graph), roots.join(" "));
            }
            let edges = members.iter().map(|m| m.edge_count());
            let summary = json!({
                "classes": members.len(),
                "min_edges": edges.clone().min(),
                "max_edges": edges.max(),
                "density_ok": density_ok,
            });
            print!("{}", to_stable_json(&summary));
        }
        Command::Family(FamilyCommand::Density { tree, s, bound }) => {
            let t = read_tree(&tree)?;
            let (ok, violator) = check_family_density_with_bound(&t, s, bound)?;
            let violator = violator.map(|m| {
                json!({
                    "vertices": m.vertex_count(),
                    "edges": m.edge_count(),
                    "roots": m.roots,
                    "edge_list": m.union_graph.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
                })
            });
            print!("{}", to_stable_json(&json!({ "holds": ok, "violator": violator })));
        }
        Command::Construct(args) => {
            let mut params = ConstructionParams::unvalidated(build_t_ab(args.a, args.b)?, args.q, args.seed)
                .with_threshold(args.threshold)
                .with_capacity(capacity_n()?);
            if let Some(s) = args.s {
                params = params.with_s(s);
            }
            if let Some(d) = args.d {
                params = params.with_d(d);
            }
            let out = run_pipeline(&params)?;
            fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
            write(&args.out.join("graph.txt"), &write_edge_list(&out.graph))?;
            write(&args.out.join("pruned.txt"), &write_edge_list(&out.pruned))?;
            write(&args.out.join("report.json"), &report_json(&out.report))?;
            write(
                &args.out.join("report.csv"),
                &format!("{REPORT_CSV_HEADER}\n{}\n", report_csv_row(&out.report)),
            )?;
            if args.dot {
                write(&args.out.join("graph.dot"), &to_dot(&out.graph, &[]))?;
                write(&args.out.join("pruned.dot"), &to_dot(&out.pruned, &out.removed))?;
            }
        }
        Command::Experiment(args) => {
            let mut config = ExperimentConfig::new(args.a, args.b, args.qlist, args.seeds, args.seed);
            config.threshold_policy = args.threshold;
            config.s = args.s;
            config.d = args.d;
            config.capacity_n = capacity_n()?;
            let summary = run_experiment(&config)?;
            fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
            write(&args.out.join("experiment.csv"), &experiment_csv(&summary))?;
            write(&args.out.join("experiment.json"), &to_stable_json(&summary))?;
        }
        Command::Oracle(OracleCommand::Exact { n, tree, p, disjoint }) => {
            let t = read_tree(&tree)?;
            let result = if disjoint {
                let h = disjoint_power(&t, p);
                exact_extremal_number(n, free_of_graph(&h))?
            } else {
                exact_extremal_number(n, free_of_power(&t, p))?
            };
            let edges: Vec<[usize; 2]> = result.witness.edges().map(|(u, v)| [u, v]).collect();
            print!("{}", to_stable_json(&json!({ "value": result.value, "witness_edges": edges })));
        }
        Command::Oracle(OracleCommand::Witness { graph, tree, p }) => {
            let g = parse_edge_list(&read(&graph)?)?;
            let t = read_tree(&tree)?;
            let search = find_power_witness(&g, &t, p)?;
            let (roots, copies) = match &search.witness {
                Some(w) => (
                    json!(w.roots),
                    json!(w.copies.iter().map(|c| c.images.clone()).collect::<Vec<_>>()),
                ),
                None => (json!([]), json!([])),
            };
            print!(
                "{}",
                to_stable_json(&json!({
                    "found": search.witness.is_some(),
                    "roots": roots,
                    "copies": copies,
                    "hypothesis_met": search.hypothesis_met,
                    "pigeonhole_margin": search.pigeonhole_margin,
                    "found_in_core": search.found_in_core,
                }))
            );
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Capacity(_)) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
