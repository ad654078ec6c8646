//! Command-line front end. Exit codes: 0 done, 1 usage or I/O error,
//! 2 infeasible (or an invalid solution), 3 search budget exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{evaluate_all, is_complete, path_length_edge_bound, complete_graph_edge_bound, BisectionMode, BoundsConfig};
use crate::exact::{export_merp_lp, exact_min_edges, ExactStatus};
use crate::graph::{
    fmt_rational, generate_topology, parse_rational, rat, Capacity, DemandSet, Network, NodeId, Path,
    Rational, Topology,
};
use crate::heuristics::{
    find_lambda_threshold, run_heuristic, sweep, Heuristic, Provenance, SolutionSubgraph, SweepConfig,
    ThresholdConfig, ThresholdError, ThresholdMethod, ThresholdTarget,
};
use crate::io::report::fmt_decimal;
use crate::io::{
    load_sndlib, parse_graph_text, parse_solution_text, write_bounds_csv, write_metrics_csv,
    write_solution_text, write_sweep_csv, ReportOptions, SolutionFile,
};
use crate::metrics::{metrics_row, EnergyParams};
use crate::routing::{RoutingOptions, DEFAULT_RETRIES};
use crate::spanner::{
    exact_spanner_small, export_spanner_lp, validate_spanner, SpannerOutcome, SpannerParams,
    SpannerSolution,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Infeasible(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "greenroute", version, about = "Route demands on as few active links as possible")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a small kept edge set with a witness routing.
    Solve(SolveArgs),
    /// Run a heuristic over a list of overprovisioning factors.
    Sweep(SweepArgs),
    /// Evaluate the lower bounds that apply to the input.
    Bounds(BoundsArgs),
    /// Export, solve or validate a fault-tolerant spanner.
    Spanner(SpannerArgs),
    /// Export the minimum edges integer program in LP format.
    Lp(LpArgs),
    /// Smallest overprovisioning factor meeting a criterion.
    Threshold(ThresholdArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Native graph file.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// SNDLib topology: a bundled name, a file, or a name under $GREENROUTE_DATA_DIR.
    #[arg(long, value_name = "NAME")]
    sndlib: Option<String>,
    /// Generated topology, e.g. grid:4 or complete:5.
    #[arg(long = "gen", value_name = "KIND:SIZE")]
    generate: Option<Topology>,
}

impl InputArgs {
    fn label(&self) -> String {
        match (&self.input, &self.sndlib, &self.generate) {
            (Some(p), _, _) => p.display().to_string(),
            (_, Some(s), _) => s.clone(),
            (_, _, Some(g)) => g.to_string(),
            _ => String::new(),
        }
    }

    /// The network with capacity λκ when λ is given, and its demands:
    /// those of a native file when present, else all-to-all of volume κ.
    fn load(&self, kappa: Rational, lambda: Option<Rational>) -> Result<(Network, DemandSet), CliError> {
        let cap = Capacity::Finite(lambda.unwrap_or(rat(1)) * kappa);
        let (net, demands) = if let Some(path) = &self.input {
            let text = read(path)?;
            let (net, dem) = parse_graph_text(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let net = if lambda.is_some() { net.with_uniform_capacity(cap) } else { net };
            (net, (!dem.is_empty()).then_some(dem))
        } else if let Some(name) = &self.sndlib {
            (load_sndlib(name).map_err(usage)?.network(cap), None)
        } else if let Some(t) = self.generate {
            (generate_topology(t, cap).map_err(usage)?, None)
        } else {
            return Err(usage("no input given"));
        };
        let n = net.node_count();
        Ok((net, demands.unwrap_or_else(|| DemandSet::all_to_all(n, kappa))))
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &FsPath, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, path: Option<&FsPath>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).ok_or_else(|| format!("`{s}` is not a number"))
}

/// Parses `a..b..step` (inclusive), `a..b` (step 1), or `x,y,z`.
pub fn parse_value_list(s: &str) -> Result<Vec<Rational>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains("..") {
        let parts: Vec<&str> = s.split("..").collect();
        let (start, end, step) = match parts.as_slice() {
            [a, b] => (parse_rat(a)?, parse_rat(b)?, rat(1)),
            [a, b, c] => (parse_rat(a)?, parse_rat(b)?, parse_rat(c)?),
            _ => return Err(format!("expected start..end[..step], got `{s}`")),
        };
        if step <= rat(0) {
            return Err(format!("step in `{s}` must be positive"));
        }
        let mut out = Vec::new();
        let mut v = start;
        while v <= end {
            out.push(v);
            v += step;
        }
        return Ok(out);
    }
    s.split(',').map(parse_rat).collect()
}

/// Seeds as `a..b` (inclusive) or `x,y,z`.
pub fn parse_seed_list(s: &str) -> Result<Vec<u64>, String> {
    let bad = || format!("bad seed list `{s}`");
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    parse_seed_list(s).map(Seeds)
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Heuristic: lle or random.
    #[arg(long, default_value = "lle")]
    heuristic: Heuristic,
    /// Seeds, e.g. 0..19 or 1,5,9; the best result is kept.
    #[arg(long, default_value = "0..19", value_parser = parse_seeds)]
    seeds: Seeds,
    /// Demand orders tried per routing attempt.
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    retries: usize,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Demand volume κ.
    #[arg(long, default_value = "1", value_parser = parse_rat)]
    kappa: Rational,
    /// Overprovisioning factor λ: every link gets capacity λκ.
    #[arg(long, value_parser = parse_rat)]
    lambda: Option<Rational>,
    #[command(flatten)]
    search: SearchArgs,
    /// Solve exactly instead of heuristically.
    #[arg(long)]
    exact: bool,
    /// Search nodes allowed to the exact solver.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Threshold λ₁ for the overprovisioning column of the metrics.
    #[arg(long, value_parser = parse_rat)]
    lambda1: Option<Rational>,
    /// Solution file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metrics CSV file.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "1", value_parser = parse_rat)]
    kappa: Rational,
    /// λ values: start..end..step, start..end, or a comma list.
    #[arg(long, conflicts_with = "of", allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Overprovisioning factors relative to λ₁, e.g. 1,2,3,4.
    #[arg(long)]
    of: Option<String>,
    /// λ₁ for --of; looked up in or added to the cache when absent.
    #[arg(long, value_parser = parse_rat)]
    lambda1: Option<Rational>,
    /// Sidecar file caching λ₁ per topology.
    #[arg(long, default_value = "lambda1_cache.csv")]
    cache: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Skip stretch and disjoint-path columns.
    #[arg(long)]
    no_metrics: bool,
    /// Add an edge lower bound column per λ.
    #[arg(long)]
    bounds: bool,
    /// Add a wall-clock column (makes output non-reproducible).
    #[arg(long)]
    runtime: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BisectionArg {
    Auto,
    Exact,
    Heuristic,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "1", value_parser = parse_rat)]
    kappa: Rational,
    /// λ for the edge-count bounds.
    #[arg(long, value_parser = parse_rat)]
    lambda: Option<Rational>,
    #[arg(long, value_enum, default_value_t = BisectionArg::Auto)]
    bisection: BisectionArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpannerArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "1", value_parser = parse_rat)]
    alpha: Rational,
    #[arg(long, default_value = "0", value_parser = parse_rat)]
    beta: Rational,
    #[arg(long, default_value_t = 2)]
    gamma: usize,
    /// Where the LP model is written.
    #[arg(long, default_value = "spanner.lp")]
    lp_out: PathBuf,
    /// Solution file to check instead of solving.
    #[arg(long)]
    validate: Option<PathBuf>,
    /// Exact search runs only up to this many edges.
    #[arg(long, default_value_t = 12)]
    max_exact_edges: usize,
    /// Edge subsets the exact search may check.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Solution file for the exact result.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LpArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "1", value_parser = parse_rat)]
    kappa: Rational,
    #[arg(long, value_parser = parse_rat)]
    lambda: Option<Rational>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Feasible,
    Tree,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "1", value_parser = parse_rat)]
    kappa: Rational,
    #[arg(long, value_enum, default_value_t = TargetArg::Feasible)]
    target: TargetArg,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Largest λ tried (default n²).
    #[arg(long)]
    lambda_max: Option<u64>,
}

fn need_lambda(input: &InputArgs, lambda: Option<Rational>) -> Result<(), CliError> {
    if lambda.is_none() && input.input.is_none() {
        return Err(usage("--lambda is required for generated and SNDLib inputs"));
    }
    Ok(())
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    need_lambda(&a.input, a.lambda)?;
    let (net, dem) = a.input.load(a.kappa, a.lambda)?;
    let sol = if a.exact {
        let r = exact_min_edges(&net, &dem, a.budget).map_err(usage)?;
        match r.status {
            ExactStatus::Optimal => SolutionSubgraph::new(
                r.edges.expect("optimal result has edges"),
                r.witness.expect("optimal result has a witness"),
                Provenance::new("exact", 0, &net, &dem),
            ),
            ExactStatus::Infeasible => return Err(CliError::Infeasible("no routing exists".into())),
            ExactStatus::BudgetExceeded => {
                let ub = r.upper_bound.map_or("?".into(), |u| u.to_string());
                return Err(CliError::Budget(format!(
                    "budget exceeded after {} nodes; optimum in [{}, {ub}]",
                    r.explored, r.lower_bound
                )));
            }
        }
    } else {
        if a.search.seeds.0.is_empty() {
            return Err(usage("no seeds given"));
        }
        let runs: Vec<_> = a
            .search
            .seeds
            .0
            .par_iter()
            .map(|&seed| {
                let opts = RoutingOptions {
                    seed,
                    retries: a.search.retries,
                };
                run_heuristic(a.search.heuristic, &net, &dem, opts)
            })
            .collect();
        let mut best: Option<SolutionSubgraph> = None;
        for run in runs {
            match run {
                Ok(s) if best.as_ref().is_none_or(|b| s.edge_count() < b.edge_count()) => best = Some(s),
                Ok(_) => {}
                Err(crate::routing::RoutingError::InfeasibleByHeuristic { .. }) => {}
                Err(e) => return Err(usage(e)),
            }
        }
        best.ok_or_else(|| CliError::Infeasible("no seed found a feasible routing".into()))?
    };
    let file = SolutionFile::from_subgraph(&net, &dem, &sol);
    let thresholds = a.lambda.zip(a.lambda1);
    let row = metrics_row(&net, &dem, &sol.kept, &sol.witness, thresholds, EnergyParams::default()).map_err(usage)?;
    emit(out, a.out.as_deref(), &write_solution_text(&file))?;
    match &a.metrics {
        Some(p) => write_file(p, &write_metrics_csv(&[row]))?,
        None => {
            let _ = writeln!(
                err,
                "kept {} of {} edges, spared {}%",
                row.kept_edges,
                row.total_edges,
                fmt_decimal(&row.spared_percent, 2)
            );
        }
    }
    Ok(())
}

// λ₁ cache rows: key,lambda1
fn cache_key(a: &SweepArgs) -> String {
    let seeds: Vec<String> = a.search.seeds.0.iter().map(u64::to_string).collect();
    format!(
        "{}|kappa={}|{}|seeds={}|retries={}",
        a.input.label(),
        fmt_rational(&a.kappa),
        a.search.heuristic,
        seeds.join(" "),
        a.search.retries
    )
}

fn read_cache(path: &FsPath) -> Result<BTreeMap<String, Rational>, CliError> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = read(path)?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut map = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        if let (Some(k), Some(v)) = (rec.get(0), rec.get(1).and_then(parse_rational)) {
            map.insert(k.to_string(), v);
        }
    }
    Ok(map)
}

fn write_cache(path: &FsPath, map: &BTreeMap<String, Rational>) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["key", "lambda1"]).expect("writing to memory");
    for (k, v) in map {
        w.write_record([k.clone(), fmt_rational(v)]).expect("writing to memory");
    }
    let text = String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8");
    write_file(path, &text)
}

fn threshold_error(e: ThresholdError) -> CliError {
    match e {
        ThresholdError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
        ThresholdError::NoSeeds => usage(e),
        _ => CliError::Infeasible(e.to_string()),
    }
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (net, _) = a.input.load(a.kappa, None)?;
    let lambdas = match (&a.lambda, &a.of) {
        (Some(l), None) => parse_value_list(l).map_err(usage)?,
        (None, Some(of)) => {
            let factors = parse_value_list(of).map_err(usage)?;
            let lambda1 = match a.lambda1 {
                Some(l) => l,
                None => {
                    let key = cache_key(a);
                    let mut cache = read_cache(&a.cache)?;
                    match cache.get(&key) {
                        Some(&l) => l,
                        None => {
                            let cfg = ThresholdConfig {
                                seeds: a.search.seeds.0.clone(),
                                retries: a.search.retries,
                                ..ThresholdConfig::new(
                                    a.kappa,
                                    ThresholdTarget::Feasible,
                                    ThresholdMethod::Heuristic(a.search.heuristic),
                                )
                            };
                            let l = rat(find_lambda_threshold(&net, &cfg).map_err(threshold_error)? as i64);
                            cache.insert(key, l);
                            write_cache(&a.cache, &cache)?;
                            l
                        }
                    }
                }
            };
            let _ = writeln!(err, "lambda1 = {}", fmt_rational(&lambda1));
            factors.into_iter().map(|f| f * lambda1).collect()
        }
        _ => return Err(usage("give either --lambda or --of")),
    };
    let cfg = SweepConfig {
        retries: a.search.retries,
        jobs: a.jobs,
        with_metrics: !a.no_metrics,
        ..SweepConfig::new(a.kappa, lambdas.clone(), a.search.heuristic, a.search.seeds.0.clone())
    };
    let report = sweep(&net, &cfg);
    let mut opts = ReportOptions {
        include_runtime: a.runtime,
        ..ReportOptions::default()
    };
    if a.bounds {
        let dem = DemandSet::all_to_all(net.node_count(), a.kappa);
        for &l in &lambdas {
            let capped = net.with_uniform_capacity(Capacity::Finite(l * a.kappa));
            let mut b = path_length_edge_bound(&capped, &dem).map_err(usage)?.max(net.node_count().saturating_sub(1));
            if is_complete(&net) {
                if let Ok(c) = complete_graph_edge_bound(net.node_count(), l * a.kappa, a.kappa) {
                    b = b.max(c);
                }
            }
            opts.edge_bounds.insert(l, b);
        }
    }
    emit(out, a.out.as_deref(), &write_sweep_csv(&report, &opts))
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (net, _) = a.input.load(a.kappa, None)?;
    let cfg = BoundsConfig {
        kappa: a.kappa,
        lambda: a.lambda,
        bisection: match a.bisection {
            BisectionArg::Auto => BisectionMode::Auto,
            BisectionArg::Exact => BisectionMode::Exact,
            BisectionArg::Heuristic => BisectionMode::Heuristic { seed: 0, restarts: 20 },
        },
    };
    let rows = evaluate_all(&net, &cfg).map_err(usage)?;
    emit(out, a.out.as_deref(), &write_bounds_csv(&rows))
}

fn spanner_report(sol: &SpannerSolution, total: usize) -> String {
    let mut s = format!(
        "kept_edges {}\ntotal_edges {total}\nspared_percent {} ({})\n",
        sol.kept.len(),
        fmt_decimal(&sol.spared_percent, 2),
        fmt_rational(&sol.spared_percent)
    );
    if let Some(m) = &sol.mean_stretch {
        s.push_str(&format!("mean_stretch {} ({})\n", fmt_decimal(m, 4), fmt_rational(m)));
    }
    s
}

fn load_spanner_solution(
    net: &Network,
    path: &FsPath,
    params: &SpannerParams,
) -> Result<SpannerSolution, CliError> {
    let file = parse_solution_text(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let kept = file.kept_edge_ids(net).map_err(usage)?;
    if file.paths.is_empty() {
        return Ok(SpannerSolution::from_kept(net, kept, params));
    }
    let mut families: BTreeMap<(NodeId, NodeId), Vec<Path>> = BTreeMap::new();
    for ((s, t), p) in file.resolved_paths(net).map_err(usage)? {
        let (key, p) = if s < t { ((s, t), p) } else { ((t, s), p.reversed()) };
        families.entry(key).or_default().push(p);
    }
    let mut sol = SpannerSolution::from_kept(net, kept, params);
    sol.families = families;
    Ok(sol)
}

fn cmd_spanner(a: &SpannerArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let params = SpannerParams::new(a.alpha, a.beta, a.gamma).map_err(usage)?;
    let (net, _) = a.input.load(rat(1), None)?;
    let export = export_spanner_lp(&net, &params).map_err(usage)?;
    write_file(&a.lp_out, &export.to_lp_string())?;
    let _ = writeln!(err, "LP model written to {}", a.lp_out.display());
    if !export.infeasible_pairs.is_empty() {
        let shown: Vec<String> = export
            .infeasible_pairs
            .iter()
            .take(5)
            .map(|(s, t)| format!("{s}-{t}"))
            .collect();
        return Err(CliError::Infeasible(format!(
            "{} pairs cannot get {} disjoint paths within budget (e.g. {})",
            export.infeasible_pairs.len(),
            params.gamma,
            shown.join(", ")
        )));
    }
    if let Some(path) = &a.validate {
        let sol = load_spanner_solution(&net, path, &params)?;
        let v = validate_spanner(&net, &sol, &params);
        let mut text = spanner_report(
            &SpannerSolution {
                spared_percent: v.spared_percent,
                mean_stretch: v.mean_stretch,
                ..sol
            },
            net.edge_count(),
        );
        for viol in &v.violations {
            text.push_str(&format!("violation {viol}\n"));
        }
        text.push_str(if v.is_ok() { "status OK\n" } else { "status INVALID\n" });
        emit(out, None, &text)?;
        if !v.is_ok() {
            return Err(CliError::Infeasible(format!("{} violations", v.violations.len())));
        }
        return Ok(());
    }
    if net.edge_count() > a.max_exact_edges {
        let _ = writeln!(err, "{} edges exceed --max-exact-edges; only the LP was written", net.edge_count());
        return Ok(());
    }
    match exact_spanner_small(&net, &params, a.budget).map_err(usage)? {
        SpannerOutcome::Optimal(sol) => {
            let mut text = spanner_report(&sol, net.edge_count());
            text.push_str("status OPTIMAL\n");
            emit(out, None, &text)?;
            if let Some(p) = &a.out {
                let file = SolutionFile {
                    comments: vec![format!(
                        "spanner alpha {} beta {} gamma {}",
                        fmt_rational(&params.alpha),
                        fmt_rational(&params.beta),
                        params.gamma
                    )],
                    kept: sol.kept.iter().map(|&e| (net.edge(e).u, net.edge(e).v)).collect(),
                    paths: sol
                        .families
                        .iter()
                        .flat_map(|(&(s, t), fam)| fam.iter().map(move |p| (s, t, p.nodes().to_vec())))
                        .collect(),
                };
                write_file(p, &write_solution_text(&file))?;
            }
            Ok(())
        }
        SpannerOutcome::Infeasible { pairs } => Err(CliError::Infeasible(format!("{} pairs infeasible", pairs.len()))),
        SpannerOutcome::BudgetExceeded { checked, lower_bound } => Err(CliError::Budget(format!(
            "checked {checked} subsets; optimum has at least {lower_bound} edges"
        ))),
    }
}

fn cmd_lp(a: &LpArgs, out: &mut dyn Write) -> Result<(), CliError> {
    need_lambda(&a.input, a.lambda)?;
    let (net, dem) = a.input.load(a.kappa, a.lambda)?;
    let text = export_merp_lp(&net, &dem).map_err(usage)?;
    emit(out, a.out.as_deref(), &text)
}

fn cmd_threshold(a: &ThresholdArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (net, _) = a.input.load(a.kappa, None)?;
    let method = if a.exact {
        ThresholdMethod::Exact { budget: a.budget }
    } else {
        ThresholdMethod::Heuristic(a.search.heuristic)
    };
    let target = match a.target {
        TargetArg::Feasible => ThresholdTarget::Feasible,
        TargetArg::Tree => ThresholdTarget::Tree,
    };
    let cfg = ThresholdConfig {
        seeds: a.search.seeds.0.clone(),
        retries: a.search.retries,
        lambda_max: a.lambda_max,
        ..ThresholdConfig::new(a.kappa, target, method)
    };
    let l = find_lambda_threshold(&net, &cfg).map_err(threshold_error)?;
    emit(out, None, &format!("{l}\n"))
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Spanner(a) => cmd_spanner(a, out, err),
        Command::Lp(a) => cmd_lp(a, out),
        Command::Threshold(a) => cmd_threshold(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("greenroute").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn value_lists() {
        assert_eq!(parse_value_list("32..48..8").unwrap(), vec![rat(32), rat(40), rat(48)]);
        assert_eq!(parse_value_list("1,2,3/2").unwrap(), vec![rat(1), rat(2), Rational::new(3, 2)]);
        assert!(parse_value_list("").unwrap().is_empty());
        assert!(parse_value_list("1..4..0").is_err());
        assert_eq!(parse_seed_list("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_seed_list("7,2").unwrap(), vec![7, 2]);
    }

    #[test]
    fn solve_exit_codes() {
        let (code, out, _) = run_cli(&["solve", "--gen", "complete:5", "--lambda", "8"]);
        assert_eq!(code, 0);
        assert!(out.contains("KEPT 4\n"));
        let (code, _, _) = run_cli(&["solve", "--gen", "star:5", "--lambda", "7"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_cli(&["solve", "--gen", "grid:4", "--lambda", "40", "--exact", "--budget", "10"]);
        assert_eq!(code, 3);
        let (code, _, err) = run_cli(&["solve", "--gen", "complete:5"]);
        assert_eq!(code, 1);
        assert!(err.contains("--lambda"));
        let (code, _, _) = run_cli(&["solve", "--gen", "complete:5", "--sndlib", "atlanta", "--lambda", "2"]);
        assert_eq!(code, 1);
        let (code, _, _) = run_cli(&["frobnicate"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn bounds_and_empty_sweep() {
        let (code, out, _) = run_cli(&["bounds", "--gen", "complete:5", "--lambda", "4"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("edges_complete_graph,edges,7,7,")));
        let (code, out, _) = run_cli(&["sweep", "--gen", "grid:3", "--lambda", ""]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
    }
}
