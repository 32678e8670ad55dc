//! Measure how ensembling repairs noisy preference graphs.
//!
//! A ground-truth DAG is perturbed many times: each true arc reverses with
//! probability delta1, and each unconnected pair gains a random arc with
//! probability delta2. Summing N independent perturbations and removing a
//! minimum feedback arc set recovers a DAG; recovery succeeds when the
//! truth survives as a subgraph. The empirical success rate is compared to
//! an analytic lower bound that improves as N grows.
//!
//! Run with: cargo run --release --example recovery_simulation

use prefgraph::{random_dag, recovery_probability, PerturbationParams, Result};

fn main() -> Result<()> {
    let truth = random_dag(6, 0.5, 3)?;
    println!("ground truth: {} vertices, {} arcs", truth.vertex_count(), truth.arc_count());

    let params = PerturbationParams::new(0.2, 0.15)?;
    println!("noise: delta1 = 0.2 (arc flips), delta2 = 0.15 (spurious arcs)\n");

    println!("{:>6}  {:>10}  {:>12}", "N", "empirical", "lower bound");
    for n in [1, 5, 20, 80, 320] {
        let report = recovery_probability(&truth, &params, n, 400, 2024)?;
        let bound = report
            .analytic_bound
            .map(|b| format!("{b:12.4}"))
            .unwrap_or_else(|| "         n/a".to_string());
        println!("{n:>6}  {:>10.4}  {bound}", report.empirical_probability);
    }

    println!("\nthe bound is vacuous (negative) at small N yet the empirical");
    println!("rate always sits above it; both climb toward 1 as N grows");
    Ok(())
}
