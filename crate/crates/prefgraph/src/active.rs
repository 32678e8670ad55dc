//! Budgeted pairwise-judgment acquisition: random seeding followed by
//! PageRank-uncertainty-driven pair selection.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::PreferenceGraph;
use crate::judge::{build_preference_graph, debiased_judge, Evaluator, Item};
use crate::seed::derive_seed;

/// Parameters of the budgeted acquisition loop and its PageRank inner loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveConfig {
    /// Total number of pairs to evaluate.
    pub budget: usize,
    /// Fraction of the budget spent on uniformly random pairs up front;
    /// strictly between 0 and 1.
    pub alpha: f64,
    /// PageRank damping factor.
    pub damping: f64,
    /// L1 convergence tolerance of the power iteration.
    pub pagerank_tolerance: f64,
    /// Additive epsilon keeping the uncertainty finite on exact ties.
    pub uncertainty_epsilon: f64,
    /// Power-iteration cap.
    pub max_iterations: usize,
}

impl ActiveConfig {
    /// Standard settings for the given budget.
    pub fn new(budget: usize) -> Self {
        Self {
            budget,
            alpha: 0.5,
            damping: 0.85,
            pagerank_tolerance: 1e-9,
            uncertainty_epsilon: 1e-6,
            max_iterations: 200,
        }
    }

    /// Validates the configuration against an item count.
    pub fn validate(&self, num_items: usize) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie strictly in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping must lie strictly in (0, 1), got {}",
                self.damping
            )));
        }
        if !(self.pagerank_tolerance > 0.0) {
            return Err(Error::InvalidParameter("pagerank tolerance must be positive".into()));
        }
        if !(self.uncertainty_epsilon > 0.0) {
            return Err(Error::InvalidParameter("uncertainty epsilon must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max iterations must be at least 1".into()));
        }
        let pairs = num_items * num_items.saturating_sub(1) / 2;
        if self.budget == 0 || self.budget > pairs {
            return Err(Error::InvalidParameter(format!(
                "budget must lie in 1..={pairs} for {num_items} items, got {}",
                self.budget
            )));
        }
        if self.random_budget() < 1 {
            return Err(Error::InvalidParameter(format!(
                "floor(alpha * budget) must be at least 1, got alpha {} with budget {}",
                self.alpha, self.budget
            )));
        }
        Ok(())
    }

    /// Pairs drawn uniformly at random before uncertainty-driven selection.
    pub fn random_budget(&self) -> usize {
        (self.alpha * self.budget as f64).floor() as usize
    }
}

/// PageRank scores plus convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankScores {
    pub scores: BTreeMap<String, f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Weighted PageRank by power iteration. Arc weights define transition
/// probabilities via per-vertex normalization; vertices without outgoing
/// weight redistribute uniformly.
pub fn pagerank(graph: &PreferenceGraph, config: &ActiveConfig) -> PageRankScores {
    let ids: Vec<&str> = graph.vertices().iter().map(String::as_str).collect();
    let n = ids.len();
    let index: std::collections::HashMap<&str, usize> =
        ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut arcs: Vec<(usize, usize, f64)> = Vec::with_capacity(graph.arc_count());
    let mut out = vec![0.0f64; n];
    for (u, v, w) in graph.arcs() {
        arcs.push((index[u], index[v], w));
        out[index[u]] += w;
    }
    let nf = n as f64;
    let d = config.damping;
    let mut x = vec![1.0 / nf; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        iterations += 1;
        let mut next = vec![0.0f64; n];
        let dangling: f64 =
            (0..n).filter(|&u| out[u] == 0.0).map(|u| x[u]).sum::<f64>() / nf;
        for v in next.iter_mut() {
            *v = (1.0 - d) / nf + d * dangling;
        }
        for &(u, v, w) in &arcs {
            next[v] += d * x[u] * w / out[u];
        }
        let l1: f64 = (0..n).map(|i| (next[i] - x[i]).abs()).sum();
        x = next;
        if l1 < config.pagerank_tolerance {
            converged = true;
            break;
        }
    }
    PageRankScores {
        scores: ids.iter().zip(&x).map(|(id, s)| ((*id).to_string(), *s)).collect(),
        iterations,
        converged,
    }
}

/// How unresolved a pair's relative order is: the closer their PageRank
/// scores, the higher the value. Symmetric.
pub fn uncertainty(
    scores: &PageRankScores,
    u: &str,
    v: &str,
    config: &ActiveConfig,
) -> Result<f64> {
    let pu = scores
        .scores
        .get(u)
        .ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
    let pv = scores
        .scores
        .get(v)
        .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
    Ok(1.0 / ((pu - pv).abs() + config.uncertainty_epsilon))
}

/// Budgeted graph construction. Phase 1 judges `floor(alpha * budget)`
/// uniformly random pairs; phase 2 repeatedly recomputes PageRank on the
/// graph so far and judges the unevaluated pair with the highest
/// uncertainty (ties to the lexicographically smallest pair). Every selected
/// pair is judged by every evaluator under both presentation orders, and the
/// verdict counts are summed into the arc weights.
pub fn active_ged(
    items: &[Item],
    question: &str,
    evaluators: &[&dyn Evaluator],
    config: &ActiveConfig,
    seed: u64,
) -> Result<PreferenceGraph> {
    if items.len() < 2 {
        return Err(Error::TooFewEntries { need: 2, got: items.len() });
    }
    if evaluators.is_empty() {
        return Err(Error::EmptyGraphList);
    }
    config.validate(items.len())?;

    let mut graph = build_preference_graph(items, &[])?;
    // Unordered pairs in lexicographic order; this is both the tie-break
    // order and the deterministic base for the random phase.
    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut pairs: Vec<(&Item, &Item)> = Vec::new();
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            pairs.push((sorted[i], sorted[j]));
        }
    }
    let mut evaluated = vec![false; pairs.len()];
    let judge_pair = |graph: &mut PreferenceGraph, (a, b): (&Item, &Item)| -> Result<()> {
        for evaluator in evaluators {
            for record in debiased_judge(*evaluator, question, a, b)? {
                graph.add_preference(&record.winner, record.loser(), 1.0)?;
            }
        }
        Ok(())
    };

    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
    order.shuffle(&mut rng);
    for &p in order.iter().take(config.random_budget()) {
        judge_pair(&mut graph, pairs[p])?;
        evaluated[p] = true;
    }

    let mut spent = config.random_budget();
    while spent < config.budget {
        let ranks = pagerank(&graph, config);
        let mut best: Option<(usize, f64)> = None;
        for (p, pair) in pairs.iter().enumerate() {
            if evaluated[p] {
                continue;
            }
            let u = uncertainty(&ranks, &pair.0.id, &pair.1.id, config)?;
            match best {
                Some((_, b)) if u <= b => {}
                _ => best = Some((p, u)),
            }
        }
        let (p, _) = best.expect("budget <= pair count leaves an unevaluated pair");
        judge_pair(&mut graph, pairs[p])?;
        evaluated[p] = true;
        spent += 1;
    }
    Ok(graph)
}
