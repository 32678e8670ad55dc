//! Consensus rankings across questions: positional weight scoring, Kemeny
//! aggregation, and pairwise-majority aggregation, each with an optional
//! per-ranking weight.
//!
//! Rankings inside a profile are interpreted as strict orders (their `order`
//! lists); attached scores are not consulted here.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::Ranking;
use crate::seed::derive_seed;

/// Largest identifier count for which exhaustive permutation search runs.
pub const EXACT_SEARCH_LIMIT: usize = 8;

/// Restart count used by the default local search.
pub const DEFAULT_RESTARTS: usize = 5;

/// A collection of full rankings over one shared identifier set, optionally
/// weighted per ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingProfile {
    pub rankings: Vec<Ranking>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<f64>>,
}

impl RankingProfile {
    pub fn new(rankings: Vec<Ranking>, weights: Option<Vec<f64>>) -> Result<Self> {
        if rankings.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let first = rankings[0].sorted_ids();
        for r in &rankings[1..] {
            if r.sorted_ids() != first {
                return Err(Error::IdentifierSetMismatch(format!(
                    "profile rankings cover different identifier sets: {:?} vs {:?}",
                    first,
                    r.sorted_ids()
                )));
            }
        }
        if let Some(w) = &weights {
            if w.len() != rankings.len() {
                return Err(Error::WeightCountMismatch {
                    expected: rankings.len(),
                    got: w.len(),
                });
            }
            if let Some(&bad) = w.iter().find(|x| !(**x > 0.0)) {
                return Err(Error::NonpositiveWeight(bad));
            }
        }
        Ok(Self { rankings, weights })
    }

    pub fn unweighted(rankings: Vec<Ranking>) -> Result<Self> {
        Self::new(rankings, None)
    }

    /// Identifier set, sorted.
    pub fn ids(&self) -> Vec<String> {
        self.rankings[0].sorted_ids()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RankingProfile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::new(doc.rankings, doc.weights)
    }
}

/// Search strategy for the Kemeny / pairwise-majority optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateMode {
    /// Exhaustive permutation search; errors above `limit` identifiers.
    Exact { limit: usize },
    /// Seeded hill-climbing over adjacent transpositions with random
    /// restarts; always applicable.
    LocalSearch { restarts: usize },
}

impl AggregateMode {
    pub fn exact() -> Self {
        AggregateMode::Exact { limit: EXACT_SEARCH_LIMIT }
    }

    pub fn local_search() -> Self {
        AggregateMode::LocalSearch { restarts: DEFAULT_RESTARTS }
    }

    /// Exact when the identifier count permits it, local search otherwise.
    pub fn auto(num_ids: usize) -> Self {
        if num_ids <= EXACT_SEARCH_LIMIT {
            Self::exact()
        } else {
            Self::local_search()
        }
    }
}

/// The five aggregation methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    WeightScore,
    Kemeny,
    WeightedKemeny,
    PairwiseMajority,
    WeightedPairwiseMajority,
}

/// Dispatches to the chosen method. Unweighted methods ignore any profile
/// weights; weighted methods default to 1 when the profile carries none.
pub fn aggregate(
    profile: &RankingProfile,
    method: Method,
    mode: AggregateMode,
    seed: u64,
) -> Result<Ranking> {
    match method {
        Method::WeightScore => weight_score_aggregate(profile),
        Method::Kemeny => kemeny_aggregate(profile, mode, seed),
        Method::WeightedKemeny => weighted_kemeny_aggregate(profile, mode, seed),
        Method::PairwiseMajority => pairwise_majority_aggregate(profile, mode, seed),
        Method::WeightedPairwiseMajority => {
            weighted_pairwise_majority_aggregate(profile, mode, seed)
        }
    }
}

/// Positional scoring: each ranking of length `l` gives its rank-`r` entry
/// the score `l − r + 1`; totals sorted descending, ties lexicographic.
pub fn weight_score_aggregate(profile: &RankingProfile) -> Result<Ranking> {
    let mut totals: BTreeMap<&str, f64> = BTreeMap::new();
    for r in &profile.rankings {
        let l = r.order.len() as f64;
        for (pos, id) in r.order.iter().enumerate() {
            *totals.entry(id.as_str()).or_insert(0.0) += l - (pos as f64 + 1.0) + 1.0;
        }
    }
    ranking_from_totals(totals)
}

/// Positional scoring over possibly-partial rankings: identifiers absent
/// from a ranking score 0 there; the output covers the identifier union.
pub fn weight_score_partial(rankings: &[Ranking]) -> Result<Ranking> {
    if rankings.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut totals: BTreeMap<&str, f64> = BTreeMap::new();
    let mut ids: BTreeSet<&str> = BTreeSet::new();
    for r in rankings {
        for id in &r.order {
            ids.insert(id.as_str());
        }
    }
    for id in &ids {
        totals.insert(id, 0.0);
    }
    for r in rankings {
        let l = r.order.len() as f64;
        for (pos, id) in r.order.iter().enumerate() {
            *totals.get_mut(id.as_str()).unwrap() += l - (pos as f64 + 1.0) + 1.0;
        }
    }
    ranking_from_totals(totals)
}

fn ranking_from_totals(totals: BTreeMap<&str, f64>) -> Result<Ranking> {
    let mut entries: Vec<(&str, f64)> = totals.into_iter().collect();
    entries.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let order: Vec<String> = entries.iter().map(|(id, _)| (*id).to_string()).collect();
    let scores: Vec<f64> = entries.iter().map(|(_, t)| *t).collect();
    Ranking::with_scores(order, scores)
}

/// Kemeny consensus with uniform ranking weights: minimizes the total
/// pairwise-disagreement count against the profile.
pub fn kemeny_aggregate(
    profile: &RankingProfile,
    mode: AggregateMode,
    seed: u64,
) -> Result<Ranking> {
    optimize(profile, false, Objective::MinimizeDisagreement, mode, seed)
}

/// Kemeny consensus weighting each ranking's disagreements by its profile
/// weight (1 when absent).
pub fn weighted_kemeny_aggregate(
    profile: &RankingProfile,
    mode: AggregateMode,
    seed: u64,
) -> Result<Ranking> {
    optimize(profile, true, Objective::MinimizeDisagreement, mode, seed)
}

/// Pairwise-majority consensus with uniform weights: maximizes the number of
/// pairwise agreements with the profile.
pub fn pairwise_majority_aggregate(
    profile: &RankingProfile,
    mode: AggregateMode,
    seed: u64,
) -> Result<Ranking> {
    optimize(profile, false, Objective::MaximizeAgreement, mode, seed)
}

/// Pairwise-majority consensus with per-ranking weights (1 when absent).
pub fn weighted_pairwise_majority_aggregate(
    profile: &RankingProfile,
    mode: AggregateMode,
    seed: u64,
) -> Result<Ranking> {
    optimize(profile, true, Objective::MaximizeAgreement, mode, seed)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Objective {
    MinimizeDisagreement,
    MaximizeAgreement,
}

/// Shared optimizer core. `pref[u][v]` holds the (weighted) count of profile
/// rankings placing `u` before `v`; both objectives are sums of `pref`
/// entries over the ordered pairs of a candidate permutation.
fn optimize(
    profile: &RankingProfile,
    weighted: bool,
    objective: Objective,
    mode: AggregateMode,
    seed: u64,
) -> Result<Ranking> {
    let ids = profile.ids();
    let n = ids.len();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut pref = vec![vec![0.0f64; n]; n];
    for (k, r) in profile.rankings.iter().enumerate() {
        let alpha = if weighted {
            profile.weights.as_ref().map_or(1.0, |w| w[k])
        } else {
            1.0
        };
        for i in 0..n {
            for j in (i + 1)..n {
                pref[index[r.order[i].as_str()]][index[r.order[j].as_str()]] += alpha;
            }
        }
    }
    // Cost of placing u directly or transitively before v in the consensus:
    // disagreements pay for rankings preferring v, agreements earn for
    // rankings preferring u. Both reduce to summing a pair matrix, so the
    // minimizer works on `cost` where lower is always better.
    let cost = |u: usize, v: usize| -> f64 {
        match objective {
            Objective::MinimizeDisagreement => pref[v][u],
            Objective::MaximizeAgreement => -pref[u][v],
        }
    };

    let order = match mode {
        AggregateMode::Exact { limit } => {
            if n > limit {
                return Err(Error::ExactOverThreshold { limit, actual: n });
            }
            let mut best: Option<(Vec<usize>, f64)> = None;
            for perm in (0..n).permutations(n) {
                let mut total = 0.0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        total += cost(perm[i], perm[j]);
                    }
                }
                match &best {
                    Some((_, c)) if total >= *c => {}
                    _ => best = Some((perm, total)),
                }
            }
            best.expect("nonempty permutation set").0
        }
        AggregateMode::LocalSearch { restarts } => {
            // Start from the weight-score order, then seeded random restarts.
            let ws = weight_score_aggregate(profile)?;
            let start: Vec<usize> = ws.order.iter().map(|id| index[id.as_str()]).collect();
            let mut best = climb(start, n, &cost);
            for r in 0..restarts {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
                let mut candidate: Vec<usize> = (0..n).collect();
                candidate.shuffle(&mut rng);
                let climbed = climb(candidate, n, &cost);
                if climbed.1 < best.1 || (climbed.1 == best.1 && climbed.0 < best.0) {
                    best = climbed;
                }
            }
            best.0
        }
    };
    Ranking::new(order.into_iter().map(|i| ids[i].clone()))
}

/// First-improvement hill climbing over adjacent transpositions. Swapping
/// neighbors u, v only changes the (u, v) pair's contribution, so the move
/// delta is `cost(v, u) − cost(u, v)`.
fn climb(mut order: Vec<usize>, n: usize, cost: &dyn Fn(usize, usize) -> f64) -> (Vec<usize>, f64) {
    loop {
        let mut improved = false;
        for k in 0..n.saturating_sub(1) {
            let (u, v) = (order[k], order[k + 1]);
            if cost(v, u) < cost(u, v) {
                order.swap(k, k + 1);
                improved = true;
            }
        }
        if !improved {
            let mut total = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    total += cost(order[i], order[j]);
                }
            }
            return (order, total);
        }
    }
}
