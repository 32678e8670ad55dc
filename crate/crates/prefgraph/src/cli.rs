//! Command-line surface. Every command reads documents in the formats the
//! library defines, prints a structured document (or a table / CSV when
//! requested) to stdout, and maps errors to stable exit codes:
//!
//! - 0: success
//! - 2: malformed input document or invalid argument
//! - 3: incompatible inputs (vertex/identifier/count mismatches, cyclic
//!   input where a DAG is required)
//! - 4: capability limits (exact search over its vertex threshold)
//! - 5: numeric failure
//! - 6: I/O failure

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::active::{active_ged, ActiveConfig};
use crate::aggregate::{aggregate, AggregateMode, Method, RankingProfile};
use crate::denoise::{denoise, DenoiseStrategy, EXACT_VERTEX_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{cycle_rate, ensemble, GraphSet, PreferenceGraph};
use crate::judge::{
    build_preference_graph, group_by_evaluator, parse_items, parse_judgments, selection_ranking,
    Evaluator, SimulatedEvaluator,
};
use crate::ranking::{kendall_tau_distance, rank_from_dag, spearman, Ranking};
use crate::seed::derive_seed;
use crate::simulate::{random_dag, recovery_probability, PerturbationParams, RecoveryReport};

/// Stable exit code for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::VertexSetMismatch { .. }
        | Error::IdentifierSetMismatch(_)
        | Error::WeightCountMismatch { .. }
        | Error::SequenceMismatch(_)
        | Error::CyclicInput
        | Error::TiedRanking(_) => 3,
        Error::ExactOverThreshold { .. } => 4,
        Error::Numeric(_) => 5,
        Error::Io(_) => 6,
        _ => 2,
    }
}

#[derive(Parser)]
#[command(
    name = "prefgraph",
    version,
    about = "Ensemble, denoise, and rank pairwise-preference graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge evaluator graphs into one by summing arc weights
    Ensemble(EnsembleArgs),
    /// Remove a feedback arc set so the graph becomes a DAG
    Denoise(DenoiseArgs),
    /// Rank a DAG's vertices by descendant count
    Rank(RankArgs),
    /// Aggregate a profile of rankings into a consensus ranking
    Aggregate(AggregateArgs),
    /// Ranking and graph metrics
    Metrics(MetricsArgs),
    /// Monte-Carlo recovery experiment against the analytic bound
    Simulate(SimulateArgs),
    /// Budgeted pair selection with simulated evaluators
    Active(ActiveArgs),
    /// Pick the best item from judgments or simulated evaluators
    Select(SelectArgs),
}

#[derive(clap::Args)]
struct EnsembleArgs {
    /// Graph document; repeat for each evaluator graph
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    /// Positive evaluator weights, comma-separated, one per input
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
}

#[derive(clap::Args)]
struct DenoiseArgs {
    /// Graph document
    #[arg(long)]
    input: PathBuf,
    /// Feedback-arc-set strategy
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    mode: StrategyArg,
    /// Vertex ceiling for the exact strategy
    #[arg(long, default_value_t = EXACT_VERTEX_LIMIT)]
    limit: usize,
}

#[derive(clap::Args)]
struct RankArgs {
    /// DAG document
    #[arg(long)]
    input: PathBuf,
}

#[derive(clap::Args)]
struct AggregateArgs {
    /// Ranking-profile document
    #[arg(long)]
    input: PathBuf,
    /// Aggregation method
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Optimizer for the Kemeny / pairwise-majority methods
    #[arg(long, value_enum, default_value_t = SearchArg::Auto)]
    mode: SearchArg,
    /// Seed for local-search restarts (required when local search runs)
    #[arg(long)]
    seed: Option<u64>,
    /// Identifier ceiling for exhaustive search
    #[arg(long, default_value_t = crate::aggregate::EXACT_SEARCH_LIMIT)]
    limit: usize,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("metric").required(true).args(["cycle_rate", "spearman", "kendall"])))]
struct MetricsArgs {
    /// Percentage of the input graphs containing a directed cycle
    #[arg(long = "cycle-rate")]
    cycle_rate: bool,
    /// Spearman rank correlation between --left and --right rankings
    #[arg(long)]
    spearman: bool,
    /// Kendall tau distance between --left and --right rankings
    #[arg(long)]
    kendall: bool,
    /// Graph document for --cycle-rate; repeatable
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    /// Ranking document
    #[arg(long)]
    left: Option<PathBuf>,
    /// Ranking document
    #[arg(long)]
    right: Option<PathBuf>,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("ground_truth").required(true).args(["truth", "vertices"])))]
struct SimulateArgs {
    /// Probability that a true arc is reversed in a sample
    #[arg(long)]
    delta1: f64,
    /// Probability that an unconnected pair gains a random arc
    #[arg(long)]
    delta2: f64,
    /// Ensemble sizes to test, comma-separated
    #[arg(long = "n", value_delimiter = ',', required = true)]
    ensemble_sizes: Vec<usize>,
    /// Monte-Carlo trials per ensemble size
    #[arg(long)]
    trials: usize,
    /// Master seed; trials derive their own seeds from it
    #[arg(long)]
    seed: u64,
    /// Unit-weight DAG document to use as ground truth
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Generate a random ground-truth DAG with this many vertices
    #[arg(long)]
    vertices: Option<usize>,
    /// Forward-pair probability of the generated ground truth
    #[arg(long = "arc-prob", default_value_t = 0.5)]
    arc_prob: f64,
    /// Seed of the generated ground truth
    #[arg(long = "truth-seed", default_value_t = 0)]
    truth_seed: u64,
    /// Worker threads for trials
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Render a human-readable table instead of the document
    #[arg(long, conflicts_with = "csv")]
    table: bool,
    /// Render CSV rows instead of the document
    #[arg(long)]
    csv: bool,
}

#[derive(clap::Args)]
struct ActiveArgs {
    /// Items document (array of {"id", "content"}); file order is the
    /// simulated evaluators' true ranking, best first
    #[arg(long)]
    items: PathBuf,
    /// Number of pairs to evaluate
    #[arg(long)]
    budget: usize,
    /// Fraction of the budget spent on random pairs
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Master seed
    #[arg(long)]
    seed: u64,
    /// Number of simulated evaluators
    #[arg(long, default_value_t = 3)]
    evaluators: usize,
    /// Flip probability of each simulated evaluator
    #[arg(long, default_value_t = 0.3)]
    flip: f64,
    /// Question identifier recorded on judgments
    #[arg(long, default_value = "q0")]
    question: String,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("verdicts").required(true).args(["judgments", "simulate"])))]
struct SelectArgs {
    /// Items document (array of {"id", "content"})
    #[arg(long)]
    items: PathBuf,
    /// Line-delimited judgment records from external evaluators
    #[arg(long)]
    judgments: Option<PathBuf>,
    /// Judge with simulated evaluators instead (items file order is the
    /// true ranking); requires --seed
    #[arg(long, requires = "seed")]
    simulate: bool,
    /// Master seed for simulated evaluators
    #[arg(long)]
    seed: Option<u64>,
    /// Number of simulated evaluators
    #[arg(long, default_value_t = 3)]
    evaluators: usize,
    /// Flip probability of each simulated evaluator
    #[arg(long, default_value_t = 0.3)]
    flip: f64,
    /// Positive evaluator weights, comma-separated (judgment mode: one per
    /// evaluator id in lexicographic order)
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Question identifier
    #[arg(long, default_value = "q0")]
    question: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Positional weight scoring
    Ws,
    /// Kemeny consensus, uniform weights
    Kemeny,
    /// Kemeny consensus, profile weights
    Wkemeny,
    /// Pairwise majority, uniform weights
    Pm,
    /// Pairwise majority, profile weights
    Wpm,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    /// Exact within the identifier limit, local search above it
    Auto,
    Exact,
    Local,
}

impl Cli {
    /// Executes the parsed command and returns the stdout payload.
    pub fn run(&self) -> Result<String> {
        match &self.command {
            Command::Ensemble(args) => run_ensemble(args),
            Command::Denoise(args) => run_denoise(args),
            Command::Rank(args) => run_rank(args),
            Command::Aggregate(args) => run_aggregate(args),
            Command::Metrics(args) => run_metrics(args),
            Command::Simulate(args) => run_simulate(args),
            Command::Active(args) => run_active(args),
            Command::Select(args) => run_select(args),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_graph(path: &Path) -> Result<PreferenceGraph> {
    PreferenceGraph::from_json(&read(path)?)
}

fn run_ensemble(args: &EnsembleArgs) -> Result<String> {
    let mut graphs = Vec::with_capacity(args.inputs.len());
    for path in &args.inputs {
        graphs.push(load_graph(path)?);
    }
    let set = GraphSet::from_graphs(graphs)?;
    let merged = ensemble(&set, args.weights.as_deref())?;
    Ok(format!("{}\n", merged.to_json()))
}

#[derive(Serialize)]
struct ArcDoc {
    from: String,
    to: String,
    w: f64,
}

#[derive(Serialize)]
struct DenoiseDoc {
    vertices: Vec<String>,
    arcs: Vec<ArcDoc>,
    sequence: Vec<String>,
    removed: Vec<ArcDoc>,
    removed_weight: f64,
}

fn run_denoise(args: &DenoiseArgs) -> Result<String> {
    let graph = load_graph(&args.input)?;
    let strategy = match args.mode {
        StrategyArg::Greedy => DenoiseStrategy::Greedy,
        StrategyArg::Exact => DenoiseStrategy::Exact { vertex_limit: args.limit },
    };
    let result = denoise(&graph, strategy)?;
    let doc = DenoiseDoc {
        vertices: result.dag.vertices().to_vec(),
        arcs: result
            .dag
            .arcs()
            .map(|(u, v, w)| ArcDoc { from: u.to_string(), to: v.to_string(), w })
            .collect(),
        sequence: result.sequence.clone(),
        removed: result
            .removed_arcs
            .iter()
            .map(|(u, v)| ArcDoc { from: u.clone(), to: v.clone(), w: graph.weight(u, v) })
            .collect(),
        removed_weight: result.removed_weight,
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("document serializes")))
}

fn run_rank(args: &RankArgs) -> Result<String> {
    let graph = load_graph(&args.input)?;
    let ranking = rank_from_dag(&graph)?;
    Ok(format!("{}\n", ranking.to_json()))
}

fn run_aggregate(args: &AggregateArgs) -> Result<String> {
    let profile = RankingProfile::from_json(&read(&args.input)?)?;
    let method = match args.method {
        MethodArg::Ws => Method::WeightScore,
        MethodArg::Kemeny => Method::Kemeny,
        MethodArg::Wkemeny => Method::WeightedKemeny,
        MethodArg::Pm => Method::PairwiseMajority,
        MethodArg::Wpm => Method::WeightedPairwiseMajority,
    };
    let mode = match args.mode {
        SearchArg::Exact => AggregateMode::Exact { limit: args.limit },
        SearchArg::Local => AggregateMode::local_search(),
        SearchArg::Auto => {
            if profile.ids().len() <= args.limit {
                AggregateMode::Exact { limit: args.limit }
            } else {
                AggregateMode::local_search()
            }
        }
    };
    let seed = match (mode, args.seed) {
        (AggregateMode::LocalSearch { .. }, None) => {
            return Err(Error::InvalidParameter(
                "--seed is required when local search is used".to_string(),
            ))
        }
        (_, seed) => seed.unwrap_or(0),
    };
    let consensus = aggregate(&profile, method, mode, seed)?;
    Ok(format!("{}\n", consensus.to_json()))
}

fn load_ranking_pair(args: &MetricsArgs) -> Result<(Ranking, Ranking)> {
    let (left, right) = match (&args.left, &args.right) {
        (Some(l), Some(r)) => (l, r),
        _ => {
            return Err(Error::InvalidParameter(
                "--left and --right ranking documents are required".to_string(),
            ))
        }
    };
    Ok((Ranking::from_json(&read(left)?)?, Ranking::from_json(&read(right)?)?))
}

fn run_metrics(args: &MetricsArgs) -> Result<String> {
    if args.cycle_rate {
        if args.inputs.is_empty() {
            return Err(Error::InvalidParameter(
                "--cycle-rate needs at least one --input graph".to_string(),
            ));
        }
        let mut graphs = Vec::with_capacity(args.inputs.len());
        for path in &args.inputs {
            graphs.push(load_graph(path)?);
        }
        let rate = cycle_rate(&graphs)?;
        let doc = serde_json::json!({ "cycle_rate_percent": rate });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes")));
    }
    let (left, right) = load_ranking_pair(args)?;
    let doc = if args.spearman {
        serde_json::json!({ "spearman": spearman(&left, &right)? })
    } else {
        serde_json::json!({ "kendall_tau_distance": kendall_tau_distance(&left, &right)? })
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes")))
}

fn format_bound(bound: Option<f64>) -> String {
    match bound {
        Some(b) => format!("{b:.6}"),
        None => "-inf".to_string(),
    }
}

fn render_reports(reports: &[RecoveryReport], table: bool, csv: bool) -> String {
    if table {
        let mut out = String::new();
        let _ = writeln!(out, "{:>8}  {:>12}  {:>12}", "N", "empirical", "bound");
        for r in reports {
            let _ = writeln!(
                out,
                "{:>8}  {:>12.6}  {:>12}",
                r.ensemble_size,
                r.empirical_probability,
                format_bound(r.analytic_bound)
            );
        }
        out
    } else if csv {
        let mut out = String::from("n,empirical,bound\n");
        for r in reports {
            let _ = writeln!(
                out,
                "{},{},{}",
                r.ensemble_size,
                r.empirical_probability,
                format_bound(r.analytic_bound)
            );
        }
        out
    } else {
        format!("{}\n", serde_json::to_string_pretty(reports).expect("reports serialize"))
    }
}

fn run_simulate(args: &SimulateArgs) -> Result<String> {
    let truth = match (&args.truth, args.vertices) {
        (Some(path), _) => load_graph(path)?,
        (None, Some(n)) => random_dag(n, args.arc_prob, args.truth_seed)?,
        (None, None) => unreachable!("clap enforces the ground_truth group"),
    };
    let params = PerturbationParams::new(args.delta1, args.delta2)?;
    if args.parallel == 0 {
        return Err(Error::InvalidParameter("--parallel must be at least 1".to_string()));
    }
    if args.ensemble_sizes.is_empty() {
        return Err(Error::InvalidParameter("--n needs at least one value".to_string()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.parallel)
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool construction failed: {e}")))?;
    let reports: Vec<RecoveryReport> = pool.install(|| {
        args.ensemble_sizes
            .iter()
            .map(|&n| recovery_probability(&truth, &params, n, args.trials, args.seed))
            .collect::<Result<_>>()
    })?;
    Ok(render_reports(&reports, args.table, args.csv))
}

/// Simulated evaluators treating `truth` as every question's true ranking.
fn simulated_panel(
    count: usize,
    flip: f64,
    seed: u64,
    truth: &Ranking,
) -> Result<Vec<SimulatedEvaluator>> {
    if count == 0 {
        return Err(Error::EmptyGraphList);
    }
    let base = derive_seed(seed, u64::from(u32::from_be_bytes(*b"eval")));
    (0..count)
        .map(|k| {
            Ok(SimulatedEvaluator::new(format!("sim{k}"), flip, derive_seed(base, k as u64))?
                .with_default_truth(truth.clone()))
        })
        .collect()
}

fn run_active(args: &ActiveArgs) -> Result<String> {
    let items = parse_items(&read(&args.items)?)?;
    let truth = Ranking::new(items.iter().map(|i| i.id.clone()))?;
    let sims = simulated_panel(args.evaluators, args.flip, args.seed, &truth)?;
    let evaluators: Vec<&dyn Evaluator> = sims.iter().map(|s| s as &dyn Evaluator).collect();
    let config = ActiveConfig { budget: args.budget, alpha: args.alpha, ..ActiveConfig::new(1) };
    let graph = active_ged(&items, &args.question, &evaluators, &config, args.seed)?;
    Ok(format!("{}\n", graph.to_json()))
}

#[derive(Serialize)]
struct SelectionDoc {
    selected: String,
    order: Vec<String>,
    scores: Vec<f64>,
}

fn run_select(args: &SelectArgs) -> Result<String> {
    let items = parse_items(&read(&args.items)?)?;
    let ranking = if args.simulate {
        let truth = Ranking::new(items.iter().map(|i| i.id.clone()))?;
        let seed = args.seed.expect("clap enforces --seed with --simulate");
        let sims = simulated_panel(args.evaluators, args.flip, seed, &truth)?;
        let evaluators: Vec<&dyn Evaluator> = sims.iter().map(|s| s as &dyn Evaluator).collect();
        selection_ranking(&items, &args.question, &evaluators, args.weights.as_deref())?
    } else {
        let path = args.judgments.as_ref().expect("clap enforces the verdicts group");
        let records = parse_judgments(&read(path)?)?;
        if records.is_empty() {
            return Err(Error::InvalidParameter(
                "judgment file contains no records".to_string(),
            ));
        }
        let questions: std::collections::BTreeSet<&str> =
            records.iter().map(|r| r.question_id.as_str()).collect();
        if questions.len() > 1 {
            return Err(Error::InvalidJudgment(format!(
                "selection needs a single question, file mixes {questions:?}"
            )));
        }
        let groups = group_by_evaluator(&records);
        let mut graphs = Vec::with_capacity(groups.len());
        let mut labels = Vec::with_capacity(groups.len());
        for (evaluator_id, group) in &groups {
            graphs.push(build_preference_graph(&items, group)?);
            labels.push(evaluator_id.clone());
        }
        let set = GraphSet::new(graphs, labels)?;
        let merged = ensemble(&set, args.weights.as_deref())?;
        let result = denoise(&merged, DenoiseStrategy::Greedy)?;
        rank_from_dag(&result.dag)?
    };
    let doc = SelectionDoc {
        selected: ranking.order[0].clone(),
        order: ranking.order.clone(),
        scores: ranking.scores.clone().unwrap_or_default(),
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("document serializes")))
}
