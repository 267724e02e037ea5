//! Command-line front end. Every command prints one line of JSON to stdout
//! echoing its resolved configuration; errors go to stderr with exit code 2.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::clustering::{
    cycle_block_clustering, exposure_weights, load_clustering, net3_clustering, save_clustering, singleton_clustering,
    ClusterMethod, Clustering, ScanOrder,
};
use crate::error::{Error, Result};
use crate::estimator::{
    ht_estimate, load_observed_responses, load_potential_outcomes, sample_assignment, simulate_estimates,
    true_effect, variance_analytic, ObservedExperiment, PotentialOutcomes, VarianceMc,
};
use crate::experiments::{cycle_power_sweep, SweepConfig};
use crate::exposure::{load_assignment, save_assignment, ExposureKind, ProbabilityTable, TableOptions};
use crate::graph::{
    gen_cycle, gen_cycle_power, gen_grid, gen_random_geometric, growth_report, load_graph, save_graph, Graph,
};
use crate::rng::mix_seed;

#[derive(Debug, Parser)]
#[command(name = "netexp", version, about = "Cluster-randomized experiments on graphs")]
struct Cli {
    /// Worker threads; defaults to all available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GenGraph(GenGraphArgs),
    /// Partition a graph into clusters.
    Cluster(ClusterArgs),
    /// Exposure probabilities for every vertex (and dependent pairs).
    Probs(ProbsArgs),
    /// Draw one cluster randomization.
    Assign(AssignArgs),
    /// Horvitz-Thompson estimate from an observed experiment.
    Estimate(EstimateArgs),
    /// Simulate the estimator over many randomizations.
    Simulate(SimulateArgs),
    /// Variance sweep over cycle powers and block sizes.
    Sweep(SweepArgs),
    /// Ball growth ratios and the empirical growth constant.
    Growth(GrowthArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Cycle,
    CyclePower,
    Rgg,
    Grid,
}

#[derive(Debug, Args, Serialize)]
struct GenGraphArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Scan {
    Index,
    Random,
}

#[derive(Debug, Args, Serialize)]
struct ClusterArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    method: ClusterMethod,
    #[arg(long)]
    block_size: Option<usize>,
    #[arg(long, value_enum, default_value = "index")]
    scan: Scan,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ProbsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    clusters: PathBuf,
    #[arg(long)]
    spec: ExposureKind,
    #[arg(long)]
    p: f64,
    /// Estimate by Monte Carlo with this many replicates.
    #[arg(long)]
    mc: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also compute joint probabilities of dependent pairs.
    #[arg(long)]
    joint: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct AssignArgs {
    #[arg(long)]
    clusters: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct EstimateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    clusters: PathBuf,
    /// `vertex z` lines, as written by `assign`.
    #[arg(long)]
    assignment: PathBuf,
    /// `vertex y` lines for observed responses.
    #[arg(long)]
    responses: PathBuf,
    /// Probability table, as written by `probs`.
    #[arg(long)]
    probs: PathBuf,
    /// `vertex y1 y0` lines; adds the analytic variance (needs joints in the table).
    #[arg(long)]
    outcomes: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    clusters: PathBuf,
    #[arg(long)]
    spec: ExposureKind,
    #[arg(long)]
    p: f64,
    #[arg(long, conflicts_with = "outcomes")]
    y1: Option<f64>,
    #[arg(long, conflicts_with = "outcomes")]
    y0: Option<f64>,
    /// `vertex y1 y0` lines.
    #[arg(long)]
    outcomes: Option<PathBuf>,
    #[arg(long)]
    reps: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Replicates for Monte Carlo probabilities (component and core conditions).
    #[arg(long)]
    mc: Option<u64>,
    /// Also compute the analytic variance.
    #[arg(long)]
    analytic: bool,
    /// Write every replicate's estimate, one per line.
    #[arg(long)]
    estimates_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    /// Flat `key = value` file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    ks: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    cs: Option<Vec<usize>>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    spec: Option<ExposureKind>,
    #[arg(long)]
    y1: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct GrowthArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 6)]
    r_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(Error::param("--threads must be at least 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(cli.command))),
        None => dispatch(cli.command),
    };
    match outcome {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command) -> Result<Value> {
    match cmd {
        Command::GenGraph(a) => gen_graph(a),
        Command::Cluster(a) => cluster(a),
        Command::Probs(a) => probs(a),
        Command::Assign(a) => assign(a),
        Command::Estimate(a) => estimate(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Growth(a) => growth(a),
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, context: &str) -> Result<T> {
    value.ok_or_else(|| Error::param(format!("{context} requires --{flag}")))
}

fn config<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn gen_graph(a: GenGraphArgs) -> Result<Value> {
    let g = match a.family {
        Family::Cycle => gen_cycle(require(a.n, "n", "cycle")?)?,
        Family::CyclePower => gen_cycle_power(require(a.n, "n", "cycle-power")?, require(a.k, "k", "cycle-power")?)?,
        Family::Rgg => gen_random_geometric(
            require(a.n, "n", "rgg")?,
            require(a.radius, "radius", "rgg")?,
            a.dim,
            require(a.seed, "seed", "rgg")?,
        )?,
        Family::Grid => gen_grid(require(a.width, "width", "grid")?, require(a.height, "height", "grid")?)?,
    };
    save_graph(&g, &a.out)?;
    Ok(json!({
        "command": "gen-graph",
        "config": config(&a),
        "num_vertices": g.num_vertices(),
        "num_edges": g.num_edges(),
        "max_degree": g.max_degree(),
    }))
}

fn cluster(a: ClusterArgs) -> Result<Value> {
    let g = load_graph(&a.graph)?;
    let n = g.num_vertices();
    let mut centers = None;
    let cl = match a.method {
        ClusterMethod::Singleton => singleton_clustering(n),
        ClusterMethod::Blocks => cycle_block_clustering(n, require(a.block_size, "block-size", "blocks clustering")?)?,
        ClusterMethod::Net3 => {
            let scan = match a.scan {
                Scan::Index => ScanOrder::ByIndex,
                Scan::Random => ScanOrder::Random {
                    seed: require(a.seed, "seed", "random scan order")?,
                },
            };
            let trace = net3_clustering(&g, scan);
            centers = Some(trace.centers);
            trace.clustering
        }
    };
    save_clustering(&cl, &a.out)?;
    let sizes = cl.cluster_sizes();
    Ok(json!({
        "command": "cluster",
        "config": config(&a),
        "num_vertices": n,
        "num_clusters": cl.num_clusters(),
        "max_cluster_size": sizes.iter().max(),
        "centers": centers.map(|c| c.len()),
    }))
}

fn load_pair(graph: &Path, clusters: &Path) -> Result<(Graph, Clustering)> {
    let g = load_graph(graph)?;
    let cl = load_clustering(clusters, Some(g.num_vertices()))?;
    Ok((g, cl))
}

fn probs(a: ProbsArgs) -> Result<Value> {
    let (g, cl) = load_pair(&a.graph, &a.clusters)?;
    let table = match a.mc {
        Some(reps) => {
            let seed = require(a.seed, "seed", "Monte Carlo probabilities")?;
            ProbabilityTable::monte_carlo(&g, &cl, a.p, a.spec, reps, seed, a.joint)?
        }
        None => {
            if !a.spec.is_neighborhood() {
                return Err(Error::param(format!(
                    "`{}` has no exact probabilities; pass --mc <replicates> and --seed",
                    a.spec
                )));
            }
            let opts = TableOptions {
                joints: a.joint,
                joint_fallback: None,
            };
            ProbabilityTable::exact(&g, &cl, a.p, a.spec, opts)?
        }
    };
    table.save(&a.out)?;
    Ok(json!({
        "command": "probs",
        "config": config(&a),
        "method": if a.mc.is_some() { "monte-carlo" } else { "exact" },
        "num_vertices": table.num_vertices(),
        "num_joint": table.joint.len(),
        "zero_probability": table.zero_probability_vertices().len(),
    }))
}

fn assign(a: AssignArgs) -> Result<Value> {
    let seed = require(a.seed, "seed", "assign")?;
    let cl = load_clustering(&a.clusters, None)?;
    let assignment = sample_assignment(&cl, a.p, seed)?;
    save_assignment(&assignment, &a.out)?;
    Ok(json!({
        "command": "assign",
        "config": config(&a),
        "num_vertices": assignment.len(),
        "treated_clusters": assignment.cluster_coins().iter().filter(|&&b| b).count(),
        "treated_vertices": assignment.z().iter().filter(|&&b| b).count(),
    }))
}

fn estimate(a: EstimateArgs) -> Result<Value> {
    let (g, cl) = load_pair(&a.graph, &a.clusters)?;
    let n = g.num_vertices();
    let table = ProbabilityTable::load(&a.probs)?;
    let assignment = load_assignment(&a.assignment, &cl)?;
    let responses = load_observed_responses(&a.responses, n)?;
    let obs = ObservedExperiment::new(&g, assignment, table.spec, responses)?;
    let mut est = ht_estimate(&obs, &table)?;
    if let Some(path) = &a.outcomes {
        let po = load_potential_outcomes(path, n)?;
        est.variance_analytic = Some(variance_analytic(&po, &table, &exposure_weights(&g, &cl)?)?.total);
    }
    if let Some(out) = &a.out {
        write_json(out, &est)?;
    }
    Ok(json!({
        "command": "estimate",
        "config": config(&a),
        "spec": table.spec,
        "p": table.p,
        "estimate": est,
    }))
}

fn simulate(a: SimulateArgs) -> Result<Value> {
    let seed = require(a.seed, "seed", "simulate")?;
    let (g, cl) = load_pair(&a.graph, &a.clusters)?;
    let n = g.num_vertices();
    let po = match &a.outcomes {
        Some(path) => load_potential_outcomes(path, n)?,
        None => PotentialOutcomes::uniform(
            n,
            require(a.y1, "y1", "simulate without --outcomes")?,
            require(a.y0, "y0", "simulate without --outcomes")?,
        )?,
    };
    let table = if a.spec.is_neighborhood() && a.mc.is_none() {
        let opts = TableOptions {
            joints: a.analytic,
            joint_fallback: Some((a.reps, mix_seed(seed, 0x5eed))),
        };
        ProbabilityTable::exact(&g, &cl, a.p, a.spec, opts)?
    } else {
        let reps = a.mc.unwrap_or(a.reps);
        ProbabilityTable::monte_carlo(&g, &cl, a.p, a.spec, reps, mix_seed(seed, 0x5eed), a.analytic)?
    };
    let estimates = simulate_estimates(&g, &cl, &po, &table, a.reps, seed)?;
    let stats = VarianceMc::from_samples(&estimates)?;
    let analytic = if a.analytic {
        Some(variance_analytic(&po, &table, &exposure_weights(&g, &cl)?)?)
    } else {
        None
    };
    if let Some(path) = &a.estimates_out {
        let mut text = String::with_capacity(estimates.len() * 20);
        for x in &estimates {
            text.push_str(&format!("{x:e}\n"));
        }
        fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    let tau = true_effect(&po);
    let result = json!({
        "true_effect": tau,
        "simulation": stats,
        "mean_z": (stats.mean - tau) / stats.mean_stderr,
        "n_times_variance": n as f64 * stats.variance,
        "variance_analytic": analytic,
        "probability_method": table.vertices.first().map(|v| v.method),
    });
    if let Some(out) = &a.out {
        write_json(out, &result)?;
    }
    Ok(json!({
        "command": "simulate",
        "config": config(&a),
        "result": result,
    }))
}

fn sweep(a: SweepArgs) -> Result<Value> {
    let mut cfg = match &a.config {
        Some(path) => Some(SweepConfig::load(path)?),
        None => None,
    };
    let resolved = match cfg.take() {
        Some(mut c) => {
            c.n = a.n.unwrap_or(c.n);
            c.ks = a.ks.clone().unwrap_or(c.ks);
            c.cs = a.cs.clone().unwrap_or(c.cs);
            c.p = a.p.unwrap_or(c.p);
            c.spec = a.spec.unwrap_or(c.spec);
            c.y1 = a.y1.unwrap_or(c.y1);
            c.y0 = a.y0.unwrap_or(c.y0);
            c.replicates = a.reps.unwrap_or(c.replicates);
            c.seed = a.seed.unwrap_or(c.seed);
            c
        }
        None => SweepConfig {
            n: a.n.unwrap_or(2000),
            ks: a.ks.clone().ok_or_else(|| Error::param("sweep requires --ks or --config"))?,
            cs: a.cs.clone().ok_or_else(|| Error::param("sweep requires --cs or --config"))?,
            p: a.p.unwrap_or(0.5),
            spec: a.spec.unwrap_or(ExposureKind::FullNeighborhood),
            y1: a.y1.unwrap_or(1.0),
            y0: a.y0.unwrap_or(0.0),
            replicates: a.reps.unwrap_or(100_000),
            seed: require(a.seed, "seed", "sweep")?,
        },
    };
    let result = cycle_power_sweep(&resolved)?;
    result.save_csv(&a.out)?;
    let argmin: Vec<Value> = resolved
        .ks
        .iter()
        .filter_map(|&k| result.argmin(k).map(|r| json!({"k": k, "c": r.c, "var": r.var})))
        .collect();
    Ok(json!({
        "command": "sweep",
        "config": config(&a),
        "resolved": resolved,
        "rows": result.rows.len(),
        "argmin": argmin,
    }))
}

fn growth(a: GrowthArgs) -> Result<Value> {
    let g = load_graph(&a.graph)?;
    let report = growth_report(&g, a.r_max)?;
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    Ok(json!({
        "command": "growth",
        "config": config(&a),
        "kappa_hat": report.kappa_hat,
        "ratios": report.ratios,
    }))
}
