//! Preference graphs for noisy pairwise comparisons.
//!
//! When several unreliable evaluators compare items in pairs, their verdicts
//! form a weighted directed graph that usually contains contradictions. This
//! crate turns such graphs back into rankings:
//!
//! - [`graph`] — the [`PreferenceGraph`] type, JSON (de)serialization, and
//!   [`ensemble`], which merges evaluator graphs by summing arc weights.
//! - [`denoise`](mod@denoise) — feedback-arc-set removal that makes a graph
//!   acyclic:
//!   a greedy vertex-sequence heuristic and an exhaustive minimum-weight
//!   search for small graphs.
//! - [`ranking`] — extracting a [`Ranking`] from a DAG by descendant count,
//!   plus Kendall tau distance and Spearman correlation.
//! - [`aggregate`](mod@aggregate) — consensus across per-question rankings: positional
//!   weight scoring, Kemeny, and pairwise-majority methods, each with
//!   uniform or weighted evaluator influence.
//! - [`simulate`] — a perturbation model for ground-truth DAGs, Monte-Carlo
//!   recovery experiments, and the analytic lower bound they are compared
//!   against.
//! - [`judge`] — the [`Evaluator`] trait, order-debiased judging, judgment
//!   ingestion, and end-to-end response-selection / model-ranking pipelines.
//! - [`active`] — budgeted pair selection that spends comparisons where a
//!   PageRank score over the current graph is least decisive.
//! - [`cli`] — the `prefgraph` command-line tool built from these parts.
//!
//! Every randomized routine takes an explicit seed and is deterministic for
//! a given input and seed — including under parallel execution, because
//! per-trial seeds are derived from trial indices rather than from
//! scheduling order.

pub mod active;
pub mod aggregate;
pub mod cli;
pub mod denoise;
pub mod error;
pub mod graph;
pub mod judge;
pub mod ranking;
pub mod seed;
pub mod simulate;

pub use active::{active_ged, pagerank, uncertainty, ActiveConfig, PageRankScores};
pub use aggregate::{
    aggregate, kemeny_aggregate, pairwise_majority_aggregate, weight_score_aggregate,
    weight_score_partial, weighted_kemeny_aggregate, weighted_pairwise_majority_aggregate,
    AggregateMode, Method, RankingProfile,
};
pub use denoise::{
    denoise, exact_min_fas, greedy_fas_order, induced_fas, DenoiseResult, DenoiseStrategy,
    VertexSequence, EXACT_VERTEX_LIMIT,
};
pub use error::{Error, Result};
pub use graph::{cycle_rate, ensemble, GraphSet, PreferenceGraph};
pub use judge::{
    all_pairs_graph, build_preference_graph, debiased_judge, group_by_evaluator, ingest_judgments,
    parse_items, parse_judgments, rank_models, select_best, selection_ranking, simulated_judge,
    AnswerSet, Evaluator, Item, JudgmentRecord, PresentationOrder, Side, SimulatedEvaluator,
};
pub use ranking::{descendant_counts, kendall_tau_distance, rank_from_dag, spearman, Ranking};
pub use simulate::{
    is_subgraph, perturb, random_dag, recovery_probability, recovery_trial, theorem_bound,
    PerturbationParams, RecoveryReport,
};
