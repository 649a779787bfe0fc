use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::graph::{WeightedEdge, WeightedGraph};
use super::{check_fraction, NetError};

/// Node filter applied to the co-mention network before reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum FilterRule {
    /// Keep nodes whose weighted degree is at least `theta` of the degree sum.
    DegreeShare { theta: f64 },
    /// Iteratively peel nodes with fewer than `k` distinct neighbours.
    KCore { k: usize },
}

impl FilterRule {
    pub fn apply(&self, graph: &WeightedGraph) -> Result<WeightedGraph, NetError> {
        match *self {
            FilterRule::DegreeShare { theta } => degree_share_filter(graph, theta),
            FilterRule::KCore { k } => Ok(kcore_filter(graph, k)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FilterRule::DegreeShare { theta } => format!("degree share >= {theta}"),
            FilterRule::KCore { k } => format!("{k}-core"),
        }
    }
}

impl Default for FilterRule {
    fn default() -> Self {
        FilterRule::DegreeShare { theta: 0.01 }
    }
}

/// Single pass: keep `v` iff its weighted degree is at least `theta` times the
/// total degree sum of the input graph, then take the induced subgraph.
pub fn degree_share_filter(graph: &WeightedGraph, theta: f64) -> Result<WeightedGraph, NetError> {
    check_fraction(theta)?;
    let degrees = graph.weighted_degrees();
    let total: f64 = degrees.values().sum();
    let cut = theta * total;
    let keep: BTreeSet<&str> = degrees.iter().filter(|(_, d)| **d >= cut).map(|(n, _)| *n).collect();
    Ok(graph.induced(&keep))
}

/// Maximal subgraph in which every node has at least `k` distinct neighbours
/// (edge direction ignored).
pub fn kcore_filter(graph: &WeightedGraph, k: usize) -> WeightedGraph {
    let mut nbrs: BTreeMap<&str, BTreeSet<&str>> = graph.nodes().map(|n| (n, BTreeSet::new())).collect();
    for (u, v, _) in graph.edges() {
        nbrs.get_mut(u).expect("node").insert(v);
        nbrs.get_mut(v).expect("node").insert(u);
    }
    let mut alive: BTreeSet<&str> = nbrs.keys().copied().collect();
    let mut queue: Vec<&str> = nbrs.iter().filter(|(_, s)| s.len() < k).map(|(n, _)| *n).collect();
    while let Some(n) = queue.pop() {
        if !alive.remove(n) {
            continue;
        }
        let gone = std::mem::take(nbrs.get_mut(n).expect("node"));
        for m in gone {
            let set = nbrs.get_mut(m).expect("node");
            set.remove(n);
            if alive.contains(m) && set.len() < k {
                queue.push(m);
            }
        }
    }
    graph.induced(&alive)
}

/// Edges carrying at least `theta` of the total edge weight, heaviest first,
/// ties in canonical pair order.
pub fn edge_weight_share_filter(graph: &WeightedGraph, theta: f64) -> Result<Vec<WeightedEdge>, NetError> {
    check_fraction(theta)?;
    let cut = theta * graph.total_weight();
    let mut out: Vec<WeightedEdge> = graph
        .edges()
        .filter(|(_, _, w)| *w >= cut)
        .map(|(u, v, weight)| WeightedEdge { u: u.to_owned(), v: v.to_owned(), weight })
        .collect();
    // stable sort keeps canonical order among equal weights
    out.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::Directedness;

    fn star() -> WeightedGraph {
        let mut g = WeightedGraph::new(Directedness::Undirected);
        for i in 0..9 {
            g.add_edge("hub", &format!("leaf{i}"), 1.0).unwrap();
        }
        g
    }

    #[test]
    fn star_keeps_only_center() {
        let g = degree_share_filter(&star(), 0.1).unwrap();
        assert_eq!(g.nodes().collect::<Vec<_>>(), vec!["hub"]);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn small_theta_keeps_everything() {
        let g = star();
        assert_eq!(degree_share_filter(&g, 0.01).unwrap(), g);
        assert!(degree_share_filter(&g, 0.0).is_err());
        assert!(degree_share_filter(&g, 1.0).is_err());
    }

    #[test]
    fn edge_share() {
        let mut g = WeightedGraph::new(Directedness::Undirected);
        g.add_edge("a", "b", 5.0).unwrap();
        g.add_edge("c", "d", 10.0).unwrap();
        g.add_edge("a", "c", 1.0).unwrap();
        let kept = edge_weight_share_filter(&g, 0.1).unwrap();
        let w: Vec<f64> = kept.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![10.0, 5.0]);

        let mut single = WeightedGraph::new(Directedness::Undirected);
        single.add_edge("a", "b", 1.0).unwrap();
        assert_eq!(edge_weight_share_filter(&single, 0.99).unwrap().len(), 1);
    }

    #[test]
    fn kcore_peels_pendants() {
        let mut g = WeightedGraph::new(Directedness::Undirected);
        for (u, v) in [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d"), ("d", "e")] {
            g.add_edge(u, v, 1.0).unwrap();
        }
        let core = kcore_filter(&g, 2);
        assert_eq!(core.nodes().collect::<Vec<_>>(), vec!["a", "b", "c"]);
        assert_eq!(kcore_filter(&g, 3).node_count(), 0);
    }
}
