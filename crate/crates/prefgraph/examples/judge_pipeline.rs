//! End-to-end response selection with unreliable judges.
//!
//! Simulated evaluators hold a true ranking but report a flipped verdict
//! with fixed probability. Every pair is judged twice — once in each
//! presentation order — so a judge that favors whichever answer it sees
//! first contributes no net signal. The per-evaluator graphs are merged,
//! denoised, and ranked; the head of the ranking is the selected response.
//!
//! Run with: cargo run --example judge_pipeline

use prefgraph::{
    build_preference_graph, debiased_judge, select_best, selection_ranking, Evaluator, Item,
    Ranking, Result, SimulatedEvaluator,
};

fn main() -> Result<()> {
    let items: Vec<Item> = (0..6)
        .map(|i| Item::new(format!("r{i}"), format!("candidate response {i}")))
        .collect();
    let truth = Ranking::new(items.iter().map(|i| i.id.clone()))?;

    // Three evaluators with 25% verdict noise, one with 40%.
    let panel: Vec<SimulatedEvaluator> = [(0u64, 0.25), (1, 0.25), (2, 0.25), (3, 0.40)]
        .into_iter()
        .map(|(k, flip)| {
            Ok(SimulatedEvaluator::new(format!("judge{k}"), flip, 9000 + k)?
                .with_default_truth(truth.clone()))
        })
        .collect::<Result<_>>()?;

    // One debiased comparison: two records, one per presentation order.
    let records = debiased_judge(&panel[0], "q0", &items[0], &items[1])?;
    for r in &records {
        println!("judge0 saw {:?} and picked {}", r.presentation_order, r.winner);
    }
    let single = build_preference_graph(&items[..2], &records)?;
    println!("two-item graph from one debiased judgment: {} arc(s)\n", single.arc_count());

    // Full pipeline over all pairs and all evaluators, trusting the noisier
    // judge half as much.
    let evaluators: Vec<&dyn Evaluator> = panel.iter().map(|e| e as &dyn Evaluator).collect();
    let weights = [1.0, 1.0, 1.0, 0.5];
    let ranking = selection_ranking(&items, "q0", &evaluators, Some(&weights))?;
    println!("selection ranking: {:?}", ranking.order);
    println!("scores: {:?}", ranking.scores.as_deref().unwrap_or(&[]));

    let best = select_best(&items, "q0", &evaluators, Some(&weights))?;
    println!("\nselected response: {best}");
    println!("true best: {}", truth.order[0]);
    Ok(())
}
