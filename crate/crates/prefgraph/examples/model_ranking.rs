//! Rank competing models across a whole question set.
//!
//! Each model answers every question; per question, a panel of noisy
//! evaluators compares the answers pairwise and the selection pipeline
//! produces a question-level ranking of the models. An aggregation method
//! then folds the per-question rankings into one leaderboard.
//!
//! Run with: cargo run --example model_ranking

use prefgraph::{
    rank_models, AggregateMode, AnswerSet, Evaluator, Method, Ranking, Result, SimulatedEvaluator,
};

fn main() -> Result<()> {
    let models: Vec<String> = (0..5).map(|i| format!("model-{i}")).collect();
    let questions: Vec<String> = (0..12).map(|q| format!("q{q:02}")).collect();

    // Every model answers every question.
    let answers = AnswerSet::from_fn(models.clone(), questions.clone(), |model, question| {
        format!("{model} answering {question}")
    })?;

    // The simulated panel privately agrees that lower-numbered models give
    // better answers, but individual verdicts flip 30% of the time.
    let truth = Ranking::new(models.clone())?;
    let panel: Vec<SimulatedEvaluator> = (0..3)
        .map(|k| {
            Ok(SimulatedEvaluator::new(format!("judge{k}"), 0.3, 550 + k)?
                .with_default_truth(truth.clone()))
        })
        .collect::<Result<_>>()?;
    let evaluators: Vec<&dyn Evaluator> = panel.iter().map(|e| e as &dyn Evaluator).collect();

    for (label, method) in [
        ("weight score     ", Method::WeightScore),
        ("kemeny           ", Method::Kemeny),
        ("pairwise majority", Method::PairwiseMajority),
    ] {
        let leaderboard = rank_models(
            &answers,
            &evaluators,
            method,
            AggregateMode::auto(models.len()),
            None,
            7,
        )?;
        println!("{label}: {:?}", leaderboard.order);
    }

    // Doubling the weight of the last four questions shifts the consensus
    // toward whoever did well late in the set.
    let mut question_weights = vec![1.0; questions.len()];
    for w in question_weights.iter_mut().rev().take(4) {
        *w = 2.0;
    }
    let weighted = rank_models(
        &answers,
        &evaluators,
        Method::WeightedKemeny,
        AggregateMode::auto(models.len()),
        Some(&question_weights),
        7,
    )?;
    println!("weighted kemeny  : {:?} (late questions doubled)", weighted.order);
    Ok(())
}
