//! Extract a ranking from a DAG and compare rankings with rank metrics.
//!
//! A vertex's score is its descendant count: the number of vertices it
//! reaches through directed paths, i.e. the number of items it (directly
//! or transitively) beats. Kendall tau distance counts discordant pairs;
//! Spearman correlates rank positions.
//!
//! Run with: cargo run --example rank_extraction

use prefgraph::{
    descendant_counts, kendall_tau_distance, rank_from_dag, spearman, PreferenceGraph, Ranking,
    Result,
};

fn main() -> Result<()> {
    let mut dag = PreferenceGraph::new(["a", "b", "c", "d", "e"].map(String::from))?;
    dag.add_preference("a", "b", 1.0)?;
    dag.add_preference("a", "c", 1.0)?;
    dag.add_preference("b", "d", 1.0)?;
    dag.add_preference("c", "d", 1.0)?;
    dag.add_preference("d", "e", 1.0)?;

    println!("descendant counts:");
    for (v, count) in descendant_counts(&dag)? {
        println!("  {v}: {count}");
    }

    let ranking = rank_from_dag(&dag)?;
    println!("\nranking: {:?}", ranking.order);
    println!("document form:\n{}", ranking.to_json());

    // b and c tie on two descendants each; ties break lexicographically in
    // the order but stay visible as equal scores.
    let scores = ranking.scores.as_deref().unwrap_or(&[]);
    println!("\nscores: {scores:?}");

    // Compare against a reference ordering.
    let reference = Ranking::new(["a", "c", "b", "d", "e"].map(String::from))?;
    let strict = Ranking::new(ranking.order.clone())?;
    println!("\nkendall tau distance to reference: {}", kendall_tau_distance(&strict, &reference)?);
    println!("spearman correlation with reference: {:.4}", spearman(&strict, &reference)?);

    Ok(())
}
