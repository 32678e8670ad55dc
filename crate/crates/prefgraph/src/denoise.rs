//! Cycle removal: turn a noisy preference graph into a DAG by deleting a
//! low-weight set of feedback arcs.
//!
//! Two strategies are provided. [`greedy_fas_order`] runs the classic
//! sink/source-stripping heuristic in O(m + n) passes and scales to large
//! graphs. [`exact_min_fas`] enumerates vertex sequences and is intended for
//! small instances only; it is exact and deterministic.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::PreferenceGraph;

/// Default vertex-count ceiling for the exact strategy.
pub const EXACT_VERTEX_LIMIT: usize = 8;

/// An ordering of every vertex in a graph. Arcs pointing leftward in the
/// sequence form the induced feedback arc set.
pub type VertexSequence = Vec<String>;

/// Strategy used by [`denoise`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenoiseStrategy {
    Greedy,
    /// Exhaustive search; errors when the graph exceeds the vertex limit.
    Exact {
        vertex_limit: usize,
    },
}

impl Default for DenoiseStrategy {
    fn default() -> Self {
        DenoiseStrategy::Greedy
    }
}

/// Outcome of a denoising run.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult {
    /// The input with the feedback arcs deleted; always acyclic.
    pub dag: PreferenceGraph,
    /// The vertex sequence whose leftward arcs were removed.
    pub sequence: VertexSequence,
    /// Deleted arcs, sorted by (from, to).
    pub removed_arcs: Vec<(String, String)>,
    /// Total weight of the deleted arcs.
    pub removed_weight: f64,
}

/// Greedy sequence construction by repeated sink/source stripping.
///
/// Sinks are prepended to the tail block, sources appended to the head block;
/// when neither exists the vertex maximizing weighted out-degree minus
/// weighted in-degree is appended to the head block. All choices break ties
/// toward the lexicographically smallest identifier, so the result is
/// deterministic.
pub fn greedy_fas_order(graph: &PreferenceGraph) -> Result<VertexSequence> {
    if graph.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = graph.vertex_count();
    let mut ids: Vec<String> = graph.vertices().to_vec();
    ids.sort();
    let index: std::collections::BTreeMap<&str, usize> =
        ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();

    // Dense weight matrix; antiparallel arcs keep their own entries.
    let mut w = vec![vec![0.0f64; n]; n];
    for (u, v, weight) in graph.arcs() {
        w[index[u]][index[v]] += weight;
    }

    let mut alive = vec![true; n];
    let mut out: Vec<f64> = (0..n).map(|u| w[u].iter().sum()).collect();
    let mut inw: Vec<f64> = (0..n).map(|v| (0..n).map(|u| w[u][v]).sum()).collect();

    let mut head: Vec<usize> = Vec::new();
    let mut tail: Vec<usize> = Vec::new(); // built back-to-front
    let mut remaining = n;

    let approx_zero = |x: f64| x.abs() < 1e-12;

    while remaining > 0 {
        // Lexicographically first sink (no outgoing weight).
        let sink = (0..n).find(|&v| alive[v] && approx_zero(out[v]));
        let chosen = if let Some(v) = sink {
            tail.push(v);
            v
        } else if let Some(v) = (0..n).find(|&v| alive[v] && approx_zero(inw[v])) {
            // Lexicographically first source.
            head.push(v);
            v
        } else {
            // Max out-minus-in weight; ties fall to the smaller identifier
            // because iteration follows sorted order and `>` is strict.
            let mut best = usize::MAX;
            let mut best_delta = f64::NEG_INFINITY;
            for v in 0..n {
                if alive[v] && out[v] - inw[v] > best_delta {
                    best_delta = out[v] - inw[v];
                    best = v;
                }
            }
            head.push(best);
            best
        };
        alive[chosen] = false;
        remaining -= 1;
        for v in 0..n {
            if alive[v] {
                inw[v] -= w[chosen][v];
                out[v] -= w[v][chosen];
            }
        }
    }

    tail.reverse();
    head.extend(tail);
    Ok(head.into_iter().map(|i| ids[i].clone()).collect())
}

/// Arcs of `graph` that point leftward in `sequence` (from a later position
/// to an earlier one), sorted by (from, to), with their total weight.
pub fn induced_fas(
    graph: &PreferenceGraph,
    sequence: &[String],
) -> Result<(Vec<(String, String)>, f64)> {
    if sequence.len() != graph.vertex_count() {
        return Err(Error::SequenceMismatch(format!(
            "sequence has {} entries, graph has {} vertices",
            sequence.len(),
            graph.vertex_count()
        )));
    }
    let mut position = std::collections::HashMap::new();
    for (i, v) in sequence.iter().enumerate() {
        if !graph.contains_vertex(v) {
            return Err(Error::SequenceMismatch(format!("unknown vertex {v:?} in sequence")));
        }
        if position.insert(v.as_str(), i).is_some() {
            return Err(Error::SequenceMismatch(format!("vertex {v:?} repeated in sequence")));
        }
    }
    let mut removed = Vec::new();
    let mut total = 0.0;
    for (u, v, w) in graph.arcs() {
        if position[u] > position[v] {
            removed.push((u.to_string(), v.to_string()));
            total += w;
        }
    }
    Ok((removed, total))
}

/// Exhaustive minimum-weight feedback arc set via sequence enumeration.
///
/// Sequences are visited in lexicographic order and only a strictly better
/// cost replaces the incumbent, so among all optimal sequences the
/// lexicographically smallest is returned. Cost grows factorially; inputs
/// larger than `vertex_limit` are rejected.
pub fn exact_min_fas(graph: &PreferenceGraph, vertex_limit: usize) -> Result<VertexSequence> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > vertex_limit {
        return Err(Error::ExactOverThreshold { limit: vertex_limit, actual: n });
    }
    let mut ids: Vec<String> = graph.vertices().to_vec();
    ids.sort();
    let index: std::collections::BTreeMap<&str, usize> =
        ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut w = vec![vec![0.0f64; n]; n];
    for (u, v, weight) in graph.arcs() {
        w[index[u]][index[v]] += weight;
    }

    let mut best: Option<(Vec<usize>, f64)> = None;
    for perm in (0..n).permutations(n) {
        let mut cost = 0.0;
        for i in 0..n {
            for j in 0..i {
                // perm[i] precedes nothing before it; arc perm[i] -> perm[j]
                // points leftward.
                cost += w[perm[i]][perm[j]];
            }
        }
        match &best {
            Some((_, c)) if cost >= *c => {}
            _ => best = Some((perm, cost)),
        }
    }
    let (perm, _) = best.expect("at least one permutation");
    Ok(perm.into_iter().map(|i| ids[i].clone()).collect())
}

/// Removes a feedback arc set chosen by `strategy` and returns the resulting
/// DAG along with the sequence and the deleted arcs.
pub fn denoise(graph: &PreferenceGraph, strategy: DenoiseStrategy) -> Result<DenoiseResult> {
    let sequence = match strategy {
        DenoiseStrategy::Greedy => greedy_fas_order(graph)?,
        DenoiseStrategy::Exact { vertex_limit } => exact_min_fas(graph, vertex_limit)?,
    };
    let (removed_arcs, removed_weight) = induced_fas(graph, &sequence)?;
    let dag = graph.without_arcs(&removed_arcs);
    debug_assert!(!dag.has_cycle());
    Ok(DenoiseResult { dag, sequence, removed_arcs, removed_weight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vertices: &[&str], arcs: &[(&str, &str, f64)]) -> PreferenceGraph {
        let mut g = PreferenceGraph::new(vertices.iter().copied()).unwrap();
        for (u, v, w) in arcs {
            g.add_preference(u, v, *w).unwrap();
        }
        g
    }

    /// Reference oracle: Held-Karp-style subset DP for minimum-weight FAS.
    /// dp[S] = cheapest leftward weight of any ordering of S, extending by
    /// choosing which vertex of S comes last.
    fn min_fas_weight_oracle(graph: &PreferenceGraph) -> f64 {
        let n = graph.vertex_count();
        let mut ids: Vec<String> = graph.vertices().to_vec();
        ids.sort();
        let index: std::collections::HashMap<&str, usize> =
            ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut w = vec![vec![0.0f64; n]; n];
        for (u, v, weight) in graph.arcs() {
            w[index[u]][index[v]] += weight;
        }
        let full = 1usize << n;
        let mut dp = vec![f64::INFINITY; full];
        dp[0] = 0.0;
        for mask in 1..full {
            for last in 0..n {
                if mask & (1 << last) == 0 {
                    continue;
                }
                let prev = mask & !(1 << last);
                if dp[prev].is_infinite() {
                    continue;
                }
                // Arcs from `last` to anything earlier in the ordering
                // (i.e. the rest of `mask`) point leftward.
                let mut extra = 0.0;
                for u in 0..n {
                    if prev & (1 << u) != 0 {
                        extra += w[last][u];
                    }
                }
                if dp[prev] + extra < dp[mask] {
                    dp[mask] = dp[prev] + extra;
                }
            }
        }
        dp[full - 1]
    }

    #[test]
    fn greedy_on_dag_removes_nothing() {
        let g = graph(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]);
        let result = denoise(&g, DenoiseStrategy::Greedy).unwrap();
        assert!(result.removed_arcs.is_empty());
        assert_eq!(result.removed_weight, 0.0);
        assert_eq!(result.dag, g);
        assert_eq!(result.sequence, vec!["a", "b", "c"]);
    }

    #[test]
    fn greedy_breaks_two_cycle_by_weight() {
        let g = graph(&["a", "b"], &[("a", "b", 3.0), ("b", "a", 1.0)]);
        let result = denoise(&g, DenoiseStrategy::Greedy).unwrap();
        assert_eq!(result.sequence, vec!["a", "b"]);
        assert_eq!(result.removed_arcs, vec![("b".to_string(), "a".to_string())]);
        assert_eq!(result.removed_weight, 1.0);
        assert!(!result.dag.has_cycle());
    }

    #[test]
    fn greedy_always_yields_dag() {
        // Fully cyclic tournament-ish graph with antiparallel arcs.
        let g = graph(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", 2.0),
                ("b", "a", 1.0),
                ("b", "c", 3.0),
                ("c", "d", 1.0),
                ("d", "a", 4.0),
                ("c", "a", 2.0),
                ("d", "b", 1.0),
            ],
        );
        let result = denoise(&g, DenoiseStrategy::Greedy).unwrap();
        assert!(!result.dag.has_cycle());
        // Removed arcs are exactly the leftward arcs of the sequence.
        let (arcs, weight) = induced_fas(&g, &result.sequence).unwrap();
        assert_eq!(result.removed_arcs, arcs);
        assert_eq!(result.removed_weight, weight);
    }

    #[test]
    fn greedy_tie_breaks_lexicographically() {
        // Symmetric two-cycle: equal weights, equal deltas. The sequence must
        // start at "a", keeping a->b and dropping b->a.
        let g = graph(&["b", "a"], &[("a", "b", 1.0), ("b", "a", 1.0)]);
        let result = denoise(&g, DenoiseStrategy::Greedy).unwrap();
        assert_eq!(result.sequence, vec!["a", "b"]);
        assert_eq!(result.removed_arcs, vec![("b".to_string(), "a".to_string())]);
    }

    #[test]
    fn exact_matches_subset_dp_oracle() {
        // Small adversarial graphs where greedy may be suboptimal.
        let cases = vec![
            graph(
                &["a", "b", "c"],
                &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 5.0)],
            ),
            graph(
                &["a", "b", "c", "d"],
                &[
                    ("a", "b", 1.0),
                    ("b", "c", 2.0),
                    ("c", "d", 3.0),
                    ("d", "a", 1.5),
                    ("b", "a", 0.5),
                    ("d", "b", 2.5),
                ],
            ),
            graph(
                &["a", "b", "c", "d", "e"],
                &[
                    ("a", "b", 1.0),
                    ("b", "c", 1.0),
                    ("c", "a", 1.0),
                    ("c", "d", 1.0),
                    ("d", "e", 1.0),
                    ("e", "c", 2.0),
                    ("e", "a", 1.0),
                ],
            ),
        ];
        for g in cases {
            let seq = exact_min_fas(&g, EXACT_VERTEX_LIMIT).unwrap();
            let (_, weight) = induced_fas(&g, &seq).unwrap();
            let oracle = min_fas_weight_oracle(&g);
            assert!(
                (weight - oracle).abs() < 1e-9,
                "exact weight {weight} differs from oracle {oracle}"
            );
            // Greedy never beats the optimum.
            let greedy_seq = greedy_fas_order(&g).unwrap();
            let (_, greedy_weight) = induced_fas(&g, &greedy_seq).unwrap();
            assert!(greedy_weight >= weight - 1e-9);
        }
    }

    #[test]
    fn exact_prefers_lexicographically_smallest_optimum() {
        // Symmetric two-cycle: both orders cost 1; [a, b] must win.
        let g = graph(&["b", "a"], &[("a", "b", 1.0), ("b", "a", 1.0)]);
        let seq = exact_min_fas(&g, EXACT_VERTEX_LIMIT).unwrap();
        assert_eq!(seq, vec!["a", "b"]);

        // No arcs at all: every order is optimal, so identity order wins.
        let empty = graph(&["c", "a", "b"], &[]);
        let seq = exact_min_fas(&empty, EXACT_VERTEX_LIMIT).unwrap();
        assert_eq!(seq, vec!["a", "b", "c"]);
    }

    #[test]
    fn exact_rejects_large_graphs() {
        let ids: Vec<String> = (0..9).map(|i| format!("v{i}")).collect();
        let g = PreferenceGraph::new(ids).unwrap();
        assert!(matches!(
            exact_min_fas(&g, EXACT_VERTEX_LIMIT),
            Err(Error::ExactOverThreshold { limit: 8, actual: 9 })
        ));
    }

    #[test]
    fn exact_beats_greedy_when_greedy_is_myopic() {
        // Heavy backward arc: greedy strips by degree and can pay more.
        let g = graph(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", 2.0),
                ("b", "c", 2.0),
                ("c", "d", 2.0),
                ("d", "a", 3.0),
                ("a", "c", 1.0),
                ("b", "d", 1.0),
            ],
        );
        let exact_seq = exact_min_fas(&g, EXACT_VERTEX_LIMIT).unwrap();
        let (_, exact_w) = induced_fas(&g, &exact_seq).unwrap();
        assert!((exact_w - min_fas_weight_oracle(&g)).abs() < 1e-9);
    }

    #[test]
    fn induced_fas_validates_sequence() {
        let g = graph(&["a", "b"], &[("a", "b", 1.0)]);
        assert!(matches!(
            induced_fas(&g, &["a".to_string()]),
            Err(Error::SequenceMismatch(_))
        ));
        assert!(matches!(
            induced_fas(&g, &["a".to_string(), "c".to_string()]),
            Err(Error::SequenceMismatch(_))
        ));
        assert!(matches!(
            induced_fas(&g, &["a".to_string(), "a".to_string()]),
            Err(Error::SequenceMismatch(_))
        ));
    }

    #[test]
    fn antiparallel_pair_never_fully_removed() {
        // Whatever order is chosen, exactly one arc of a two-cycle survives.
        let g = graph(&["a", "b"], &[("a", "b", 2.0), ("b", "a", 3.0)]);
        for strategy in [
            DenoiseStrategy::Greedy,
            DenoiseStrategy::Exact { vertex_limit: EXACT_VERTEX_LIMIT },
        ] {
            let result = denoise(&g, strategy).unwrap();
            assert_eq!(result.removed_arcs.len(), 1);
            assert_eq!(result.dag.arc_count(), 1);
        }
    }

    #[test]
    fn empty_graph_rejected() {
        // PreferenceGraph::new already rejects empty vertex sets, so exercise
        // the denoise-level guards through the strategy dispatch.
        let g = graph(&["a"], &[]);
        let result = denoise(&g, DenoiseStrategy::Greedy).unwrap();
        assert_eq!(result.sequence, vec!["a"]);
        assert!(result.removed_arcs.is_empty());
    }
}
