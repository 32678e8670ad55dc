//! Evaluator harness: pluggable pairwise judges, position-bias debiasing,
//! judgment ingestion, preference-graph construction from verdicts, and the
//! response-selection / model-ranking pipelines.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate, AggregateMode, Method, RankingProfile};
use crate::denoise::{denoise, DenoiseStrategy};
use crate::error::{Error, Result};
use crate::graph::{ensemble, GraphSet, PreferenceGraph};
use crate::ranking::{rank_from_dag, Ranking};
use crate::seed::{hash_bytes, unit_float};

/// A candidate under comparison: an identifier plus the text shown to
/// evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub content: String,
}

impl Item {
    pub fn new(id: impl Into<String>, content: impl Into<String>) -> Self {
        Self { id: id.into(), content: content.into() }
    }
}

/// Parses an items document: an array of {"id", "content"} objects with
/// pairwise-distinct ids.
pub fn parse_items(text: &str) -> Result<Vec<Item>> {
    let items: Vec<Item> =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut seen = std::collections::HashSet::new();
    for item in &items {
        if !seen.insert(item.id.clone()) {
            return Err(Error::DuplicateVertex(item.id.clone()));
        }
    }
    Ok(items)
}

/// Which ordering the pair was presented in when the verdict was collected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationOrder {
    Ab,
    Ba,
}

/// One pairwise verdict from one evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgmentRecord {
    pub evaluator_id: String,
    pub question_id: String,
    pub item_a: String,
    pub item_b: String,
    pub winner: String,
    pub presentation_order: PresentationOrder,
}

impl JudgmentRecord {
    pub fn validate(&self) -> Result<()> {
        if self.item_a == self.item_b {
            return Err(Error::InvalidJudgment(format!(
                "record compares {} with itself",
                self.item_a
            )));
        }
        if self.winner != self.item_a && self.winner != self.item_b {
            return Err(Error::InvalidJudgment(format!(
                "winner {} is neither {} nor {}",
                self.winner, self.item_a, self.item_b
            )));
        }
        Ok(())
    }

    /// The non-winning item of the pair.
    pub fn loser(&self) -> &str {
        if self.winner == self.item_a {
            &self.item_b
        } else {
            &self.item_a
        }
    }
}

/// Which presented position won.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// A pairwise judge. Implementations receive the question and both item
/// contents and must return a side — abstention is not part of the contract.
pub trait Evaluator {
    /// Stable identifier recorded on emitted judgments.
    fn id(&self) -> &str;

    /// Judges the pair as presented: `first` was shown before `second`.
    fn judge(&self, question: &str, first: &Item, second: &Item) -> Result<Side>;

    /// Whether `judge` tolerates concurrent invocation. Serial adapters
    /// (e.g. wrapping a stateful connection) should return false; callers
    /// must then serialize calls.
    fn concurrent_safe(&self) -> bool {
        true
    }
}

/// Offline noisy judge: knows a true ranking per question and reports the
/// truly better item, flipping its verdict with a fixed probability. The
/// flip draw is a pure hash of (seed, question, unordered pair), so verdicts
/// are deterministic and independent of presentation order.
#[derive(Debug, Clone)]
pub struct SimulatedEvaluator {
    id: String,
    flip_probability: f64,
    seed: u64,
    truths: HashMap<String, Ranking>,
    default_truth: Option<Ranking>,
}

impl SimulatedEvaluator {
    pub fn new(id: impl Into<String>, flip_probability: f64, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&flip_probability) {
            return Err(Error::InvalidParameter(format!(
                "flip probability must lie in [0, 0.5), got {flip_probability}"
            )));
        }
        Ok(Self {
            id: id.into(),
            flip_probability,
            seed,
            truths: HashMap::new(),
            default_truth: None,
        })
    }

    /// True ranking used for questions without a specific entry.
    pub fn with_default_truth(mut self, truth: Ranking) -> Self {
        self.default_truth = Some(truth);
        self
    }

    /// True ranking for one question.
    pub fn set_truth(&mut self, question: impl Into<String>, truth: Ranking) {
        self.truths.insert(question.into(), truth);
    }

    fn truth_for(&self, question: &str) -> Result<&Ranking> {
        self.truths
            .get(question)
            .or(self.default_truth.as_ref())
            .ok_or_else(|| {
                Error::InvalidParameter(format!("no true ranking for question {question:?}"))
            })
    }

    fn flips(&self, question: &str, id1: &str, id2: &str) -> bool {
        let (lo, hi) = if id1 <= id2 { (id1, id2) } else { (id2, id1) };
        let mut bytes = Vec::with_capacity(question.len() + lo.len() + hi.len() + 2);
        bytes.extend_from_slice(question.as_bytes());
        bytes.push(0x1f);
        bytes.extend_from_slice(lo.as_bytes());
        bytes.push(0x1f);
        bytes.extend_from_slice(hi.as_bytes());
        unit_float(hash_bytes(self.seed, &bytes)) < self.flip_probability
    }
}

impl Evaluator for SimulatedEvaluator {
    fn id(&self) -> &str {
        &self.id
    }

    fn judge(&self, question: &str, first: &Item, second: &Item) -> Result<Side> {
        let truth = self.truth_for(question)?;
        let positions = truth.positions();
        let p1 = *positions
            .get(first.id.as_str())
            .ok_or_else(|| Error::UnknownVertex(first.id.clone()))?;
        let p2 = *positions
            .get(second.id.as_str())
            .ok_or_else(|| Error::UnknownVertex(second.id.clone()))?;
        let mut winner = if p1 < p2 { Side::First } else { Side::Second };
        if self.flips(question, &first.id, &second.id) {
            winner = match winner {
                Side::First => Side::Second,
                Side::Second => Side::First,
            };
        }
        Ok(winner)
    }
}

/// The winning item identifier for one presentation of a pair.
pub fn simulated_judge(
    sim: &SimulatedEvaluator,
    question: &str,
    item_a: &Item,
    item_b: &Item,
) -> Result<String> {
    Ok(match sim.judge(question, item_a, item_b)? {
        Side::First => item_a.id.clone(),
        Side::Second => item_b.id.clone(),
    })
}

/// Queries the evaluator under both presentation orders and returns both
/// verdicts, so a pure position preference nets out downstream.
pub fn debiased_judge(
    evaluator: &dyn Evaluator,
    question: &str,
    item_a: &Item,
    item_b: &Item,
) -> Result<[JudgmentRecord; 2]> {
    if item_a.id == item_b.id {
        return Err(Error::SelfPreference(item_a.id.clone()));
    }
    let forward = evaluator.judge(question, item_a, item_b)?;
    let backward = evaluator.judge(question, item_b, item_a)?;
    let make = |winner: &Item, order: PresentationOrder| JudgmentRecord {
        evaluator_id: evaluator.id().to_string(),
        question_id: question.to_string(),
        item_a: item_a.id.clone(),
        item_b: item_b.id.clone(),
        winner: winner.id.clone(),
        presentation_order: order,
    };
    Ok([
        make(
            match forward {
                Side::First => item_a,
                Side::Second => item_b,
            },
            PresentationOrder::Ab,
        ),
        make(
            match backward {
                Side::First => item_b,
                Side::Second => item_a,
            },
            PresentationOrder::Ba,
        ),
    ])
}

/// Folds verdicts into a preference graph over the given items: each record
/// adds weight 1 on winner → loser. Order-invariant.
pub fn build_preference_graph(
    items: &[Item],
    judgments: &[JudgmentRecord],
) -> Result<PreferenceGraph> {
    let mut graph = PreferenceGraph::new(items.iter().map(|i| i.id.clone()))?;
    for record in judgments {
        record.validate()?;
        for id in [&record.item_a, &record.item_b] {
            if !graph.contains_vertex(id) {
                return Err(Error::UnknownVertex(id.clone()));
            }
        }
        graph.add_preference(&record.winner, record.loser(), 1.0)?;
    }
    Ok(graph)
}

/// Parses line-delimited judgment records, reporting the 1-based line number
/// of any malformed or invariant-violating line. Blank lines are skipped.
pub fn parse_judgments(text: &str) -> Result<Vec<JudgmentRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: JudgmentRecord = serde_json::from_str(line).map_err(|e| {
            Error::MalformedLine { line: i + 1, message: e.to_string() }
        })?;
        record.validate().map_err(|e| Error::MalformedLine {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Reads and parses a judgment file.
pub fn ingest_judgments(path: &Path) -> Result<Vec<JudgmentRecord>> {
    let text = std::fs::read_to_string(path)?;
    parse_judgments(&text)
}

/// Groups records by evaluator, preserving lexicographic evaluator order.
pub fn group_by_evaluator(records: &[JudgmentRecord]) -> BTreeMap<String, Vec<JudgmentRecord>> {
    let mut groups: BTreeMap<String, Vec<JudgmentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.evaluator_id.clone()).or_default().push(r.clone());
    }
    groups
}

/// All-pairs debiased judging of `items` by one evaluator, folded into that
/// evaluator's preference graph.
pub fn all_pairs_graph(
    items: &[Item],
    question: &str,
    evaluator: &dyn Evaluator,
) -> Result<PreferenceGraph> {
    let mut records = Vec::with_capacity(items.len() * items.len());
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            records.extend(debiased_judge(evaluator, question, &items[i], &items[j])?);
        }
    }
    build_preference_graph(items, &records)
}

/// Full selection pipeline: per-evaluator all-pairs graphs, ensembled
/// (optionally with evaluator weights), denoised greedily, then ranked.
pub fn selection_ranking(
    items: &[Item],
    question: &str,
    evaluators: &[&dyn Evaluator],
    evaluator_weights: Option<&[f64]>,
) -> Result<Ranking> {
    if items.len() < 2 {
        return Err(Error::TooFewEntries { need: 2, got: items.len() });
    }
    if evaluators.is_empty() {
        return Err(Error::EmptyGraphList);
    }
    let mut graphs = Vec::with_capacity(evaluators.len());
    let mut labels = Vec::with_capacity(evaluators.len());
    for evaluator in evaluators {
        graphs.push(all_pairs_graph(items, question, *evaluator)?);
        labels.push(evaluator.id().to_string());
    }
    let set = GraphSet::new(graphs, labels)?;
    let merged = ensemble(&set, evaluator_weights)?;
    let result = denoise(&merged, DenoiseStrategy::Greedy)?;
    rank_from_dag(&result.dag)
}

/// The top identifier of the selection pipeline.
pub fn select_best(
    items: &[Item],
    question: &str,
    evaluators: &[&dyn Evaluator],
    evaluator_weights: Option<&[f64]>,
) -> Result<String> {
    Ok(selection_ranking(items, question, evaluators, evaluator_weights)?.order[0].clone())
}

/// A complete models × questions answer matrix.
#[derive(Debug, Clone)]
pub struct AnswerSet {
    models: Vec<String>,
    questions: Vec<String>,
    answers: HashMap<(String, String), String>,
}

impl AnswerSet {
    /// Builds the matrix from (model, question, answer) triples, requiring
    /// every model to have answered every question exactly once.
    pub fn new(
        models: Vec<String>,
        questions: Vec<String>,
        triples: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut answers = HashMap::new();
        for (model, question, content) in triples {
            if !models.contains(&model) {
                return Err(Error::UnknownVertex(model));
            }
            if !questions.contains(&question) {
                return Err(Error::InvalidParameter(format!("unknown question {question:?}")));
            }
            if answers.insert((model.clone(), question.clone()), content).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate answer for model {model:?}, question {question:?}"
                )));
            }
        }
        for m in &models {
            for q in &questions {
                if !answers.contains_key(&(m.clone(), q.clone())) {
                    return Err(Error::InvalidParameter(format!(
                        "model {m:?} has no answer for question {q:?}"
                    )));
                }
            }
        }
        Ok(Self { models, questions, answers })
    }

    /// Convenience constructor computing each answer from (model, question).
    pub fn from_fn(
        models: Vec<String>,
        questions: Vec<String>,
        mut answer: impl FnMut(&str, &str) -> String,
    ) -> Result<Self> {
        let triples = models
            .iter()
            .flat_map(|m| {
                questions.iter().map(|q| (m.clone(), q.clone(), answer(m, q))).collect::<Vec<_>>()
            })
            .collect();
        Self::new(models, questions, triples)
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn questions(&self) -> &[String] {
        &self.questions
    }

    pub fn answer(&self, model: &str, question: &str) -> &str {
        &self.answers[&(model.to_string(), question.to_string())]
    }
}

/// Model-ranking pipeline: one selection ranking per question (models as
/// vertices, their answers as contents), aggregated across questions by the
/// chosen method. `question_weights` feed the weighted aggregators.
pub fn rank_models(
    answers: &AnswerSet,
    evaluators: &[&dyn Evaluator],
    method: Method,
    mode: AggregateMode,
    question_weights: Option<&[f64]>,
    seed: u64,
) -> Result<Ranking> {
    if evaluators.is_empty() {
        return Err(Error::EmptyGraphList);
    }
    let mut per_question = Vec::with_capacity(answers.questions().len());
    for q in answers.questions() {
        let items: Vec<Item> = answers
            .models()
            .iter()
            .map(|m| Item::new(m.clone(), answers.answer(m, q).to_string()))
            .collect();
        per_question.push(selection_ranking(&items, q, evaluators, None)?);
    }
    let profile = RankingProfile::new(per_question, question_weights.map(|w| w.to_vec()))?;
    aggregate(&profile, method, mode, seed)
}
