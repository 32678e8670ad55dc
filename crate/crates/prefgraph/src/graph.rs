//! Weighted directed preference graphs.
//!
//! A [`PreferenceGraph`] holds candidates as vertices and directed arcs whose
//! positive weights express accumulated preference strength. Antiparallel
//! arcs (`u -> v` and `v -> u`) may coexist; the netted view is available
//! through [`PreferenceGraph::net_weight`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed graph over candidate identifiers with positive arc weights.
///
/// Invariants enforced on every write:
/// - no self-arcs,
/// - every stored weight is strictly positive,
/// - arc endpoints are declared vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceGraph {
    vertices: Vec<String>,
    arcs: BTreeMap<(String, String), f64>,
}

impl PreferenceGraph {
    /// Creates a graph with the given vertices and no arcs.
    pub fn new<I, S>(vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        Ok(Self { vertices, arcs: BTreeMap::new() })
    }

    /// Vertex identifiers in stored order.
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    /// Arcs sorted by (from, to), with their weights.
    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.arcs.iter().map(|((u, v), w)| (u.as_str(), v.as_str(), *w))
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Stored weight of `u -> v`, or 0 when the arc is absent.
    pub fn weight(&self, u: &str, v: &str) -> f64 {
        self.arcs.get(&(u.to_string(), v.to_string())).copied().unwrap_or(0.0)
    }

    pub fn has_arc(&self, u: &str, v: &str) -> bool {
        self.arcs.contains_key(&(u.to_string(), v.to_string()))
    }

    /// Records a preference of `winner` over `loser`, accumulating weight.
    pub fn add_preference(&mut self, winner: &str, loser: &str, weight: f64) -> Result<()> {
        if winner == loser {
            return Err(Error::SelfPreference(winner.to_string()));
        }
        if !self.contains_vertex(winner) {
            return Err(Error::UnknownVertex(winner.to_string()));
        }
        if !self.contains_vertex(loser) {
            return Err(Error::UnknownVertex(loser.to_string()));
        }
        if !(weight > 0.0) {
            return Err(Error::NonpositiveWeight(weight));
        }
        *self.arcs.entry((winner.to_string(), loser.to_string())).or_insert(0.0) += weight;
        Ok(())
    }

    /// Accumulates weight on an arc whose endpoints are already known valid.
    /// Ensemble and perturbation paths use this to skip re-validation.
    pub(crate) fn accumulate_unchecked(&mut self, from: &str, to: &str, weight: f64) {
        *self.arcs.entry((from.to_string(), to.to_string())).or_insert(0.0) += weight;
    }

    /// Net preference `w(u -> v) - w(v -> u)`. Antisymmetric in its arguments.
    pub fn net_weight(&self, u: &str, v: &str) -> Result<f64> {
        if u == v {
            return Err(Error::SelfPreference(u.to_string()));
        }
        if !self.contains_vertex(u) {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(self.weight(u, v) - self.weight(v, u))
    }

    /// Weighted out-degree: sum of weights on arcs leaving `v`.
    pub fn out_weight(&self, v: &str) -> f64 {
        self.arcs
            .range((v.to_string(), String::new())..)
            .take_while(|((u, _), _)| u == v)
            .map(|(_, w)| *w)
            .sum()
    }

    /// Weighted in-degree: sum of weights on arcs entering `v`.
    pub fn in_weight(&self, v: &str) -> f64 {
        self.arcs.iter().filter(|((_, to), _)| to == v).map(|(_, w)| *w).sum()
    }

    /// Returns a copy without the listed arcs.
    pub fn without_arcs(&self, removed: &[(String, String)]) -> Self {
        let removed: std::collections::HashSet<_> = removed.iter().collect();
        let arcs = self
            .arcs
            .iter()
            .filter(|(key, _)| !removed.contains(key))
            .map(|(k, w)| (k.clone(), *w))
            .collect();
        Self { vertices: self.vertices.clone(), arcs }
    }

    /// True iff the graph contains a directed cycle.
    ///
    /// Iterative three-color depth-first search.
    pub fn has_cycle(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let index: BTreeMap<&str, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for ((u, v), _) in &self.arcs {
            succ[index[u.as_str()]].push(index[v.as_str()]);
        }
        let mut color = vec![Color::White; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if color[start] != Color::White {
                continue;
            }
            // Stack holds (vertex, next successor offset).
            let mut stack = vec![(start, 0usize)];
            color[start] = Color::Gray;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < succ[v].len() {
                    let t = succ[v][*next];
                    *next += 1;
                    match color[t] {
                        Color::Gray => return true,
                        Color::White => {
                            color[t] = Color::Gray;
                            stack.push((t, 0));
                        }
                        Color::Black => {}
                    }
                } else {
                    color[v] = Color::Black;
                    stack.pop();
                }
            }
        }
        false
    }

    /// Serializes to the canonical graph document (arcs sorted by from, to).
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            vertices: self.vertices.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|((from, to), w)| ArcDoc { from: from.clone(), to: to.clone(), w: *w })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph document serializes")
    }

    /// Parses a graph document, enforcing all graph invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut graph = Self::new(doc.vertices)?;
        for arc in doc.arcs {
            graph.add_preference(&arc.from, &arc.to, arc.w)?;
        }
        Ok(graph)
    }

    /// Sorted copy of the vertex set, for set-level comparisons.
    pub fn sorted_vertices(&self) -> Vec<String> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    arcs: Vec<ArcDoc>,
}

#[derive(Serialize, Deserialize)]
struct ArcDoc {
    from: String,
    to: String,
    w: f64,
}

/// A collection of preference graphs over one shared vertex set,
/// one per evaluator.
#[derive(Debug, Clone)]
pub struct GraphSet {
    graphs: Vec<PreferenceGraph>,
    labels: Vec<String>,
}

impl GraphSet {
    /// Builds a set, checking that all member graphs share one vertex set.
    pub fn new(graphs: Vec<PreferenceGraph>, labels: Vec<String>) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::EmptyGraphList);
        }
        if labels.len() != graphs.len() {
            return Err(Error::WeightCountMismatch { expected: graphs.len(), got: labels.len() });
        }
        let first = graphs[0].sorted_vertices();
        for g in &graphs[1..] {
            let other = g.sorted_vertices();
            if other != first {
                return Err(Error::VertexSetMismatch { left: first, right: other });
            }
        }
        Ok(Self { graphs, labels })
    }

    /// Convenience constructor labeling graphs `g0`, `g1`, ...
    pub fn from_graphs(graphs: Vec<PreferenceGraph>) -> Result<Self> {
        let labels = (0..graphs.len()).map(|i| format!("g{i}")).collect();
        Self::new(graphs, labels)
    }

    pub fn graphs(&self) -> &[PreferenceGraph] {
        &self.graphs
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// Merges evaluator graphs into one: arc set is the union, each arc weight
/// the sum of per-graph weights, optionally scaled per evaluator.
pub fn ensemble(set: &GraphSet, evaluator_weights: Option<&[f64]>) -> Result<PreferenceGraph> {
    if let Some(weights) = evaluator_weights {
        if weights.len() != set.len() {
            return Err(Error::WeightCountMismatch { expected: set.len(), got: weights.len() });
        }
        if let Some(&bad) = weights.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::NonpositiveWeight(bad));
        }
    }
    let mut merged = PreferenceGraph::new(set.graphs()[0].vertices().to_vec())?;
    for (i, g) in set.graphs().iter().enumerate() {
        let scale = evaluator_weights.map_or(1.0, |w| w[i]);
        for (u, v, w) in g.arcs() {
            merged.accumulate_unchecked(u, v, scale * w);
        }
    }
    Ok(merged)
}

/// Percentage of graphs containing at least one directed cycle.
pub fn cycle_rate(graphs: &[PreferenceGraph]) -> Result<f64> {
    if graphs.is_empty() {
        return Err(Error::EmptyGraphList);
    }
    let cyclic = graphs.iter().filter(|g| g.has_cycle()).count();
    Ok(100.0 * cyclic as f64 / graphs.len() as f64)
}
