//! Aggregate per-question rankings into one consensus ranking.
//!
//! Five methods are available: positional weight scoring (fast, scores
//! items by position across rankings), Kemeny (minimizes total Kendall tau
//! distance to the profile), pairwise majority (maximizes pairwise
//! agreements), and weighted variants of the latter two that scale each
//! ranking's influence.
//!
//! Run with: cargo run --example aggregate_rankings

use prefgraph::{aggregate, AggregateMode, Method, Ranking, RankingProfile, Result};

fn main() -> Result<()> {
    let rankings = vec![
        Ranking::new(["a", "b", "c", "d"].map(String::from))?,
        Ranking::new(["a", "c", "b", "d"].map(String::from))?,
        Ranking::new(["b", "a", "d", "c"].map(String::from))?,
        Ranking::new(["d", "c", "b", "a"].map(String::from))?,
    ];

    // Unweighted profile: every ranking counts once.
    let uniform = RankingProfile::new(rankings.clone(), None)?;
    // Weighted profile: the contrarian final ranking dominates.
    let weighted = RankingProfile::new(rankings, Some(vec![1.0, 1.0, 1.0, 5.0]))?;

    let mode = AggregateMode::exact();
    for (label, profile, method) in [
        ("weight score        ", &uniform, Method::WeightScore),
        ("kemeny              ", &uniform, Method::Kemeny),
        ("pairwise majority   ", &uniform, Method::PairwiseMajority),
        ("weighted kemeny     ", &weighted, Method::WeightedKemeny),
        ("weighted pw majority", &weighted, Method::WeightedPairwiseMajority),
    ] {
        let consensus = aggregate(profile, method, mode, 0)?;
        println!("{label}: {:?}", consensus.order);
    }

    // Above eight items exhaustive search is off the table; local search
    // starts from the weight-score order and polishes it with seeded
    // restarts. Identical seeds give identical results.
    let big: Vec<Ranking> = (0..6)
        .map(|i| {
            let mut ids: Vec<String> = (0..12).map(|k| format!("m{k:02}")).collect();
            ids.rotate_left(i);
            Ranking::new(ids)
        })
        .collect::<Result<_>>()?;
    let big_profile = RankingProfile::new(big, None)?;
    let local = aggregate(&big_profile, Method::Kemeny, AggregateMode::local_search(), 42)?;
    println!("\nlocal-search kemeny over 12 items: {:?}", local.order);

    Ok(())
}
