//! Build preference graphs from raw pairwise verdicts and merge them.
//!
//! Three evaluators compare four responses. Each verdict adds a unit-weight
//! arc winner -> loser; the ensemble sums the per-evaluator graphs with
//! reliability weights, so a strong evaluator's verdicts count for more.
//!
//! Run with: cargo run --example build_and_ensemble

use prefgraph::{ensemble, GraphSet, PreferenceGraph, Result};

fn main() -> Result<()> {
    let ids = ["r0", "r1", "r2", "r3"];

    // Per-evaluator verdicts as (winner, loser) pairs.
    let verdicts: [&[(&str, &str)]; 3] = [
        &[("r0", "r1"), ("r0", "r2"), ("r1", "r2"), ("r0", "r3"), ("r1", "r3"), ("r2", "r3")],
        &[("r0", "r1"), ("r2", "r0"), ("r1", "r2"), ("r0", "r3"), ("r1", "r3"), ("r2", "r3")],
        &[("r1", "r0"), ("r0", "r2"), ("r2", "r1"), ("r3", "r0"), ("r1", "r3"), ("r2", "r3")],
    ];

    let mut graphs = Vec::new();
    for pairs in verdicts {
        let mut g = PreferenceGraph::new(ids.iter().map(|s| s.to_string()))?;
        for (winner, loser) in pairs {
            g.add_preference(winner, loser, 1.0)?;
        }
        graphs.push(g);
    }

    for (i, g) in graphs.iter().enumerate() {
        println!(
            "evaluator {i}: {} arcs, cyclic: {}",
            g.arc_count(),
            if g.has_cycle() { "yes" } else { "no" }
        );
    }

    // The first evaluator is trusted twice as much as the third.
    let set = GraphSet::from_graphs(graphs)?;
    let merged = ensemble(&set, Some(&[2.0, 1.5, 1.0]))?;

    println!("\nweighted ensemble ({} arcs):", merged.arc_count());
    for (u, v, w) in merged.arcs() {
        println!("  {u} -> {v}  weight {w:.1}");
    }
    println!(
        "\nnet preference r0 vs r1: {:+.1} (positive favors r0)",
        merged.net_weight("r0", "r1")?
    );
    println!("ensemble cyclic: {}", if merged.has_cycle() { "yes" } else { "no" });

    println!("\ndocument form:\n{}", merged.to_json());
    Ok(())
}
