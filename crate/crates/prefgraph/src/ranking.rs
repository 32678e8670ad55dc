//! Ranking extraction from DAGs and ranking-comparison metrics.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PreferenceGraph;

/// A total order over candidate identifiers, best first, optionally with a
/// score per position. Equal scores mark ties; the listed order still breaks
/// them (lexicographically when produced by this crate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub order: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scores: Option<Vec<f64>>,
}

impl Ranking {
    /// Strict ranking without scores.
    pub fn new<I, S>(order: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::build(order.into_iter().map(Into::into).collect(), None)
    }

    /// Ranking with a score per position; scores must be nonincreasing along
    /// the order so that equal scores form contiguous tie groups.
    pub fn with_scores(order: Vec<String>, scores: Vec<f64>) -> Result<Self> {
        Self::build(order, Some(scores))
    }

    fn build(order: Vec<String>, scores: Option<Vec<f64>>) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut seen = HashSet::new();
        for id in &order {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        if let Some(s) = &scores {
            if s.len() != order.len() {
                return Err(Error::Malformed(format!(
                    "ranking has {} entries but {} scores",
                    order.len(),
                    s.len()
                )));
            }
            if s.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Malformed(
                    "scores must be nonincreasing along the order".to_string(),
                ));
            }
        }
        Ok(Self { order, scores })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 0-based position of each identifier.
    pub fn positions(&self) -> HashMap<&str, usize> {
        self.order.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect()
    }

    /// True when equal adjacent scores mark at least one tie.
    pub fn has_ties(&self) -> bool {
        match &self.scores {
            Some(s) => s.windows(2).any(|w| w[0] == w[1]),
            None => false,
        }
    }

    /// 1-based ranks; tied positions (equal scores) share the average of the
    /// positional ranks they span.
    pub fn fractional_ranks(&self) -> HashMap<&str, f64> {
        let n = self.order.len();
        let mut ranks = HashMap::with_capacity(n);
        match &self.scores {
            Some(scores) => {
                let mut i = 0;
                while i < n {
                    let mut j = i;
                    while j < n && scores[j] == scores[i] {
                        j += 1;
                    }
                    // positions i..j hold ranks i+1 ..= j; average them.
                    let avg = (i + 1 + j) as f64 / 2.0;
                    for k in i..j {
                        ranks.insert(self.order[k].as_str(), avg);
                    }
                    i = j;
                }
            }
            None => {
                for (i, v) in self.order.iter().enumerate() {
                    ranks.insert(v.as_str(), (i + 1) as f64);
                }
            }
        }
        ranks
    }

    pub fn sorted_ids(&self) -> Vec<String> {
        let mut ids = self.order.clone();
        ids.sort();
        ids
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ranking document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Ranking =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::build(doc.order, doc.scores)
    }
}

/// Number of vertices reachable from each vertex, excluding itself.
pub fn descendant_counts(dag: &PreferenceGraph) -> Result<BTreeMap<String, usize>> {
    if dag.has_cycle() {
        return Err(Error::CyclicInput);
    }
    let ids: Vec<&str> = dag.vertices().iter().map(String::as_str).collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for (u, v, _) in dag.arcs() {
        succ[index[u]].push(index[v]);
    }
    let mut counts = BTreeMap::new();
    for (start, id) in ids.iter().enumerate() {
        let mut visited = vec![false; ids.len()];
        let mut stack = vec![start];
        visited[start] = true;
        let mut reached = 0usize;
        while let Some(v) = stack.pop() {
            for &t in &succ[v] {
                if !visited[t] {
                    visited[t] = true;
                    reached += 1;
                    stack.push(t);
                }
            }
        }
        counts.insert((*id).to_string(), reached);
    }
    Ok(counts)
}

/// Ranking by descendant count, descending; ties broken by identifier.
/// Scores are the counts.
pub fn rank_from_dag(dag: &PreferenceGraph) -> Result<Ranking> {
    let counts = descendant_counts(dag)?;
    let mut entries: Vec<(&String, &usize)> = counts.iter().collect();
    entries.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    let order: Vec<String> = entries.iter().map(|(id, _)| (*id).clone()).collect();
    let scores: Vec<f64> = entries.iter().map(|(_, c)| **c as f64).collect();
    Ranking::with_scores(order, scores)
}

fn check_same_ids(r1: &Ranking, r2: &Ranking) -> Result<()> {
    if r1.sorted_ids() != r2.sorted_ids() {
        return Err(Error::IdentifierSetMismatch(format!(
            "rankings cover different identifier sets: {:?} vs {:?}",
            r1.sorted_ids(),
            r2.sorted_ids()
        )));
    }
    Ok(())
}

/// Count of unordered pairs the two rankings order oppositely.
///
/// Both rankings must be strict: tied scores are rejected because a tied
/// pair has no defined concordance.
pub fn kendall_tau_distance(r1: &Ranking, r2: &Ranking) -> Result<usize> {
    check_same_ids(r1, r2)?;
    for (r, name) in [(r1, "first"), (r2, "second")] {
        if r.has_ties() {
            return Err(Error::TiedRanking(format!("{name} ranking contains tied scores")));
        }
    }
    let p2 = r2.positions();
    let mut discordant = 0;
    for i in 0..r1.order.len() {
        for j in (i + 1)..r1.order.len() {
            if p2[r1.order[i].as_str()] > p2[r1.order[j].as_str()] {
                discordant += 1;
            }
        }
    }
    Ok(discordant)
}

/// Spearman rank correlation over the two rankings' (fractional) ranks.
pub fn spearman(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    check_same_ids(r1, r2)?;
    let n = r1.order.len();
    if n < 2 {
        return Err(Error::TooFewEntries { need: 2, got: n });
    }
    let ranks1 = r1.fractional_ranks();
    let ranks2 = r2.fractional_ranks();
    let xs: Vec<f64> = r1.order.iter().map(|v| ranks1[v.as_str()]).collect();
    let ys: Vec<f64> = r1.order.iter().map(|v| ranks2[v.as_str()]).collect();
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for i in 0..n {
        let dx = xs[i] - mean_x;
        let dy = ys[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::Numeric(
            "rank variance is zero; correlation undefined".to_string(),
        ));
    }
    Ok(cov / (var_x * var_y).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(vertices: &[&str], arcs: &[(&str, &str)]) -> PreferenceGraph {
        let mut g = PreferenceGraph::new(vertices.iter().copied()).unwrap();
        for (u, v) in arcs {
            g.add_preference(u, v, 1.0).unwrap();
        }
        g
    }

    fn ranking(ids: &[&str]) -> Ranking {
        Ranking::new(ids.iter().copied()).unwrap()
    }

    #[test]
    fn descendant_counts_examples() {
        let path = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let counts = descendant_counts(&path).unwrap();
        assert_eq!(counts["a"], 2);
        assert_eq!(counts["b"], 1);
        assert_eq!(counts["c"], 0);

        let isolated = dag(&["x", "y"], &[]);
        assert!(descendant_counts(&isolated).unwrap().values().all(|&c| c == 0));

        let diamond =
            dag(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]);
        let counts = descendant_counts(&diamond).unwrap();
        assert_eq!(counts["a"], 3);
        assert_eq!(counts["b"], 1);
        assert_eq!(counts["c"], 1);
        assert_eq!(counts["d"], 0);
    }

    #[test]
    fn descendant_counts_rejects_cycles() {
        let cyclic = dag(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(matches!(descendant_counts(&cyclic), Err(Error::CyclicInput)));
        assert!(matches!(rank_from_dag(&cyclic), Err(Error::CyclicInput)));
    }

    #[test]
    fn rank_from_dag_orders_by_count_then_id() {
        let path = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(rank_from_dag(&path).unwrap().order, vec!["a", "b", "c"]);

        let diamond =
            dag(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]);
        let r = rank_from_dag(&diamond).unwrap();
        assert_eq!(r.order, vec!["a", "b", "c", "d"]);
        assert_eq!(r.scores, Some(vec![3.0, 1.0, 1.0, 0.0]));

        let bare = dag(&["b", "a"], &[]);
        assert_eq!(rank_from_dag(&bare).unwrap().order, vec!["a", "b"]);
    }

    #[test]
    fn rank_from_dag_respects_arcs_between_distinct_counts() {
        // desc strictly decreases along arcs in a DAG, so an arc's tail
        // always precedes its head when counts differ.
        let g = dag(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("a", "d"), ("d", "e"), ("b", "e")],
        );
        let r = rank_from_dag(&g).unwrap();
        let pos = r.positions();
        let counts = descendant_counts(&g).unwrap();
        for (u, v, _) in g.arcs() {
            if counts[u] != counts[v] {
                assert!(pos[u] < pos[v], "arc {u}->{v} out of order");
            }
        }
    }

    #[test]
    fn kendall_examples() {
        let r1 = ranking(&["a", "b", "c"]);
        assert_eq!(kendall_tau_distance(&r1, &r1).unwrap(), 0);
        let rev = ranking(&["c", "b", "a"]);
        assert_eq!(kendall_tau_distance(&r1, &rev).unwrap(), 3);
        let swap = ranking(&["b", "a", "c"]);
        assert_eq!(kendall_tau_distance(&r1, &swap).unwrap(), 1);
        // Symmetry.
        assert_eq!(
            kendall_tau_distance(&r1, &swap).unwrap(),
            kendall_tau_distance(&swap, &r1).unwrap()
        );
    }

    #[test]
    fn kendall_rejects_ties_and_mismatch() {
        let tied = Ranking::with_scores(
            vec!["a".to_string(), "b".to_string()],
            vec![1.0, 1.0],
        )
        .unwrap();
        let strict = ranking(&["a", "b"]);
        assert!(matches!(kendall_tau_distance(&tied, &strict), Err(Error::TiedRanking(_))));
        let other = ranking(&["a", "c"]);
        assert!(matches!(
            kendall_tau_distance(&strict, &other),
            Err(Error::IdentifierSetMismatch(_))
        ));
    }

    #[test]
    fn spearman_identity_reversal_and_example() {
        let r = ranking(&["a", "b", "c", "d"]);
        assert_eq!(spearman(&r, &r).unwrap(), 1.0);
        let rev = ranking(&["d", "c", "b", "a"]);
        assert_eq!(spearman(&r, &rev).unwrap(), -1.0);
        let swapped = ranking(&["a", "c", "b", "d"]);
        let rho = spearman(&r, &swapped).unwrap();
        assert!((rho - 0.8).abs() < 1e-12, "rho = {rho}");
    }

    #[test]
    fn spearman_fractional_ranks_on_ties() {
        // b and c tie in the first ranking: both receive rank 2.5.
        let tied = Ranking::with_scores(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![3.0, 1.0, 1.0, 0.0],
        )
        .unwrap();
        let ranks = tied.fractional_ranks();
        assert_eq!(ranks["a"], 1.0);
        assert_eq!(ranks["b"], 2.5);
        assert_eq!(ranks["c"], 2.5);
        assert_eq!(ranks["d"], 4.0);
        let strict = ranking(&["a", "b", "c", "d"]);
        let rho = spearman(&tied, &strict).unwrap();
        assert!(rho > 0.9 && rho < 1.0, "rho = {rho}");
    }

    #[test]
    fn spearman_guards() {
        let single = ranking(&["a"]);
        assert!(matches!(spearman(&single, &single), Err(Error::TooFewEntries { .. })));
        let all_tied = Ranking::with_scores(
            vec!["a".into(), "b".into()],
            vec![1.0, 1.0],
        )
        .unwrap();
        let strict = ranking(&["a", "b"]);
        assert!(matches!(spearman(&all_tied, &strict), Err(Error::Numeric(_))));
    }

    #[test]
    fn ranking_construction_guards() {
        assert!(matches!(Ranking::new(["a", "a"]), Err(Error::DuplicateVertex(_))));
        assert!(matches!(Ranking::new(Vec::<String>::new()), Err(Error::EmptyVertexSet)));
        assert!(matches!(
            Ranking::with_scores(vec!["a".into(), "b".into()], vec![1.0]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            Ranking::with_scores(vec!["a".into(), "b".into()], vec![1.0, 2.0]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn ranking_round_trip() {
        let r = Ranking::with_scores(
            vec!["a".into(), "b".into()],
            vec![2.0, 1.0],
        )
        .unwrap();
        let text = r.to_json();
        assert_eq!(Ranking::from_json(&text).unwrap(), r);

        let bare = ranking(&["x", "y"]);
        let text = bare.to_json();
        assert!(!text.contains("scores"));
        assert_eq!(Ranking::from_json(&text).unwrap(), bare);
    }
}
