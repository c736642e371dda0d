//! `lml`: exact computations around k-local positive ±1 edge weighings.
//!
//! Subcommands: `gnk` (recurrence tables as CSV), `construct` (graph family
//! generators), `check` (scripted verification suites), `extremal` (exact
//! minimum weight over trees, cached), `classify` (evidence reports),
//! `split` / `ydelta` / `peel` (structural graph operations on interchange
//! JSON).
//!
//! Exit codes: 0 success, 1 domain error or failed check, 2 usage error.

mod cache;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lml_core::classifier::{
    check_avg_degree_instances, check_degree_bounded_claims, check_small_k_claims, classify,
    ClassifierPolicy,
};
use lml_core::constructions::{paper_weighing, ConstructionSpec, Family};
use lml_core::extremal::{
    extremal_over_trees, with_thread_pool, ExtremalResult, FamilyConstraint,
};
use lml_core::gnk::{gnk_table, reference_value};
use lml_core::graph::{
    graph_to_json, parse_graph_json, peel_positive_cycle_edges, split_tree, y_delta_transform,
    EdgeSubset, WeightedGraph,
};
use lml_core::ratio::{ratio_string, Rational};

use cache::{ExtremalOutputs, ExtremalParams, ResultCache, ResultRecord, Timestamps};

#[derive(Parser)]
#[command(name = "lml", version, about = "Exact combinatorics of k-local positive edge weighings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(alias = "subdivided_star")]
    SubdividedStar,
    #[value(alias = "clipped_star")]
    ClippedStar,
    Comb,
    #[value(alias = "alternating_comb")]
    AlternatingComb,
    #[value(alias = "dense_block")]
    DenseBlock,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::SubdividedStar => Family::SubdividedStar,
            FamilyArg::ClippedStar => Family::ClippedStar,
            FamilyArg::Comb => Family::Comb,
            FamilyArg::AlternatingComb => Family::AlternatingComb,
            FamilyArg::DenseBlock => Family::DenseBlock,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeighingArg {
    Paper,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    SmallK,
    Degree,
    AvgDegree,
    Table1,
}

#[derive(Subcommand)]
enum Command {
    /// Emit g(n,k) as CSV with columns n, g, g_over_n
    Gnk {
        #[arg(long)]
        k: u32,
        #[arg(long = "n-max")]
        n_max: u32,
        /// Base-case override n=v (repeatable), e.g. --override 26=-4
        #[arg(long = "override", value_parser = parse_override)]
        overrides: Vec<(u32, i64)>,
    },
    /// Emit a named construction as interchange JSON
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        /// Apply the family's canonical k-local positive weighing
        #[arg(long, value_enum)]
        weighing: Option<WeighingArg>,
    },
    /// Run a scripted verification suite; exits 1 if any claim fails
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Exact minimum total weight over all k-local positive weighings of
    /// all trees with n edges (cached in results.jsonl)
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "max-degree")]
        max_degree: Option<usize>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Recompute even on a cache hit
        #[arg(long = "no-cache")]
        no_cache: bool,
    },
    /// Classify k over a window of tree sizes (table on stderr, JSON on
    /// stdout)
    Classify {
        #[arg(long)]
        k: usize,
        #[arg(long = "max-degree")]
        max_degree: Option<usize>,
        #[arg(long = "n-from")]
        n_from: Option<usize>,
        #[arg(long = "n-to")]
        n_to: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Split a tree into two connected parts of balanced size
    Split {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Replace an all-negative cycle by a negative star on a new center
    Ydelta {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated edge indices forming the cycle
        #[arg(long)]
        cycle: String,
    },
    /// Remove positive cycle edges until every positive edge is a bridge
    Peel {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn parse_override(s: &str) -> Result<(u32, i64), String> {
    let (n, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected n=v, got {s:?}"))?;
    Ok((
        n.trim().parse().map_err(|e| format!("bad n in {s:?}: {e}"))?,
        v.trim().parse().map_err(|e| format!("bad v in {s:?}: {e}"))?,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gnk { k, n_max, overrides } => cmd_gnk(k, n_max, &overrides),
        Command::Construct {
            family,
            t,
            r,
            k,
            weighing,
        } => cmd_construct(family.into(), t, r, k, weighing),
        Command::Check { suite, n_max } => cmd_check(suite, n_max),
        Command::Extremal {
            n,
            k,
            max_degree,
            jobs,
            no_cache,
        } => cmd_extremal(n, k, max_degree, jobs, no_cache),
        Command::Classify {
            k,
            max_degree,
            n_from,
            n_to,
            jobs,
        } => cmd_classify(k, max_degree, n_from, n_to, jobs),
        Command::Split { input } => cmd_split(input),
        Command::Ydelta { input, cycle } => cmd_ydelta(input, &cycle),
        Command::Peel { input } => cmd_peel(input),
    }
}

fn cmd_gnk(k: u32, n_max: u32, overrides: &[(u32, i64)]) -> Result<ExitCode> {
    let map: BTreeMap<u32, i64> = overrides.iter().copied().collect();
    let table = gnk_table(k, n_max, &map)?;
    println!("n,g,g_over_n");
    for (n, g) in table.iter() {
        println!("{n},{g},{}", ratio_string(Rational::new(g, i64::from(n))));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(
    family: Family,
    t: u32,
    r: Option<u32>,
    k: Option<u32>,
    weighing: Option<WeighingArg>,
) -> Result<ExitCode> {
    let spec = ConstructionSpec { family, t, r, k };
    let graph = match weighing {
        Some(WeighingArg::Paper) => {
            let k = k.context("--weighing paper requires --k")?;
            paper_weighing(&spec, k)?
        }
        None => spec.build()?,
    };
    println!("{}", graph_to_json(&graph));
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(suite: SuiteArg, n_max: Option<usize>) -> Result<ExitCode> {
    let mut all_pass = true;
    match suite {
        SuiteArg::Table1 => {
            for k in 7..=15 {
                let table = gnk_table(k, 35, &BTreeMap::new())?;
                let ok = (1..=35).all(|n| table.get(n) == reference_value(n, k));
                all_pass &= ok;
                println!("{} g(n,{k}) matches all 35 reference entries", verdict(ok));
            }
        }
        SuiteArg::SmallK => {
            for v in check_small_k_claims(n_max.unwrap_or(12))? {
                all_pass &= v.pass;
                print_claim(&v.claim, v.pass, &v.detail);
            }
        }
        SuiteArg::Degree => {
            for v in check_degree_bounded_claims(3, n_max.unwrap_or(13))? {
                all_pass &= v.pass;
                print_claim(&v.claim, v.pass, &v.detail);
            }
        }
        SuiteArg::AvgDegree => {
            // (k, t, alpha, membership the construction is expected to show)
            let instances = [
                (11, 1, Rational::new(3, 1), false),
                (11, 2, Rational::new(5, 2), true),
                (15, 2, Rational::new(3, 1), true),
            ];
            for (k, t, alpha, expect_member) in instances {
                let c = check_avg_degree_instances(k, t, alpha)?;
                let ok = c.member == expect_member
                    && c.total_weight == -i64::from(t)
                    && c.k_local_positive
                    && c.positive_edges_all_bridges;
                all_pass &= ok;
                println!(
                    "{} H_{{{k},{t}}}: avg {} vs alpha {} -> member={}, weight {}, \
                     k-local positive={}, peeled {} positive cycle edges, {} bridges remain",
                    verdict(ok),
                    ratio_string(c.average_degree),
                    ratio_string(alpha),
                    c.member,
                    c.total_weight,
                    c.k_local_positive,
                    c.peeled,
                    c.bridge_count_after_peel,
                );
            }
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_claim(claim: &str, pass: bool, detail: &str) {
    if pass {
        println!("PASS {claim}");
    } else {
        println!("FAIL {claim}: {detail}");
    }
}

fn graph_value(g: &WeightedGraph) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&graph_to_json(g))?)
}

fn outputs_from_result(r: &ExtremalResult) -> Result<ExtremalOutputs> {
    Ok(ExtremalOutputs {
        value: r.value,
        vacuous: r.vacuous,
        witness_graph: graph_value(&r.witness_graph)?,
        witness_weighing: r.witness_weighing.clone(),
        trees_searched: r.stats.trees_searched,
        nodes: r.stats.nodes,
        prunes: r.stats.prunes,
    })
}

#[derive(Serialize)]
struct ExtremalReport<'a> {
    #[serde(flatten)]
    parameters: &'a ExtremalParams,
    #[serde(flatten)]
    outputs: &'a ExtremalOutputs,
}

fn cmd_extremal(
    n: usize,
    k: usize,
    max_degree: Option<usize>,
    jobs: Option<usize>,
    no_cache: bool,
) -> Result<ExitCode> {
    let params = ExtremalParams { n, k, max_degree };
    let cache = ResultCache::from_env();

    let outputs = match (!no_cache).then(|| cache.lookup(&params)).flatten() {
        Some(record) => record.outputs,
        None => {
            let started = Instant::now();
            let constraint = FamilyConstraint {
                max_degree,
                min_avg_degree: None,
            };
            let result =
                with_thread_pool(jobs, || extremal_over_trees(n, k, &constraint))?;
            let outputs = outputs_from_result(&result)?;
            let record = ResultRecord {
                schema_version: cache::SCHEMA_VERSION,
                command: "extremal".into(),
                parameters: params.clone(),
                outputs: outputs.clone(),
                timestamps: Timestamps {
                    run_at_epoch_s: SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0),
                    elapsed_ms: started.elapsed().as_millis() as u64,
                },
                revision: env!("CARGO_PKG_VERSION").into(),
            };
            cache.append(&record)?;
            outputs
        }
    };

    let report = ExtremalReport {
        parameters: &params,
        outputs: &outputs,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ClassifyWitness {
    value: i64,
    graph: serde_json::Value,
    weighing: Vec<i8>,
}

#[derive(Serialize)]
struct ClassifyReportJson {
    k: usize,
    max_degree: Option<usize>,
    window: [usize; 2],
    status: &'static str,
    f_estimate: Option<i64>,
    c_estimate: Option<String>,
    per_n: BTreeMap<usize, i64>,
    witnesses: BTreeMap<usize, ClassifyWitness>,
    theorem_verdicts: Vec<VerdictJson>,
    cache_keys: Vec<String>,
}

#[derive(Serialize)]
struct VerdictJson {
    claim: String,
    pass: bool,
    detail: String,
}

fn cmd_classify(
    k: usize,
    max_degree: Option<usize>,
    n_from: Option<usize>,
    n_to: Option<usize>,
    jobs: Option<usize>,
) -> Result<ExitCode> {
    let from = n_from.unwrap_or(k);
    let to = n_to.unwrap_or_else(|| from.max((k + 5).min(14)));
    if from > to {
        bail!("empty window: n-from {from} > n-to {to}");
    }
    let constraint = FamilyConstraint {
        max_degree,
        min_avg_degree: None,
    };
    let report = with_thread_pool(jobs, || {
        classify(k, &constraint, from..=to, &ClassifierPolicy::default())
    })
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    // human-readable table on stderr, machine JSON on stdout
    eprintln!("k = {k}, window [{from}, {to}], status: {}", report.status.name());
    eprintln!("{:>4} {:>8} {:>10}", "n", "W(n,k)", "W/n");
    for (&n, &w) in &report.per_n {
        eprintln!(
            "{n:>4} {w:>8} {:>10}",
            ratio_string(Rational::new(w, n as i64))
        );
    }
    for v in &report.theorem_verdicts {
        eprintln!("{} {}", verdict(v.pass), v.claim);
    }

    let mut witnesses = BTreeMap::new();
    for (&n, r) in &report.witnesses {
        witnesses.insert(
            n,
            ClassifyWitness {
                value: r.value,
                graph: graph_value(&r.witness_graph)?,
                weighing: r.witness_weighing.clone(),
            },
        );
    }
    let json = ClassifyReportJson {
        k,
        max_degree,
        window: [report.window.0, report.window.1],
        status: report.status.name(),
        f_estimate: report.f_estimate,
        c_estimate: report.c_estimate.map(ratio_string),
        per_n: report.per_n.clone(),
        witnesses,
        theorem_verdicts: report
            .theorem_verdicts
            .iter()
            .map(|v| VerdictJson {
                claim: v.claim.clone(),
                pass: v.pass,
                detail: v.detail.clone(),
            })
            .collect(),
        cache_keys: report.cache_keys.clone(),
    };
    println!("{}", serde_json::to_string(&json)?);
    Ok(ExitCode::SUCCESS)
}

fn read_graph(input: Option<PathBuf>) -> Result<WeightedGraph> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?,
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading graph JSON from stdin")?;
            buf
        }
    };
    Ok(parse_graph_json(&text)?)
}

fn cmd_split(input: Option<PathBuf>) -> Result<ExitCode> {
    let g = read_graph(input)?;
    let (a, b) = split_tree(&g)?;
    #[derive(Serialize)]
    struct SplitOut {
        part1: Vec<usize>,
        part2: Vec<usize>,
    }
    println!(
        "{}",
        serde_json::to_string(&SplitOut {
            part1: a.indices().to_vec(),
            part2: b.indices().to_vec(),
        })?
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_ydelta(input: Option<PathBuf>, cycle: &str) -> Result<ExitCode> {
    let g = read_graph(input)?;
    let indices: Vec<usize> = cycle
        .split(',')
        .map(|s| s.trim().parse().with_context(|| format!("bad edge index {s:?}")))
        .collect::<Result<_>>()?;
    let out = y_delta_transform(&g, &EdgeSubset::new(indices))?;
    println!("{}", graph_to_json(&out));
    Ok(ExitCode::SUCCESS)
}

fn cmd_peel(input: Option<PathBuf>) -> Result<ExitCode> {
    let g = read_graph(input)?;
    let (out, removed) = peel_positive_cycle_edges(&g)?;
    #[derive(Serialize)]
    struct PeelOut {
        removed: usize,
        graph: serde_json::Value,
    }
    println!(
        "{}",
        serde_json::to_string(&PeelOut {
            removed,
            graph: graph_value(&out)?,
        })?
    );
    Ok(ExitCode::SUCCESS)
}
