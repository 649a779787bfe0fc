use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::NetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Directedness {
    Directed,
    Undirected,
}

/// Weighted graph over string node ids. Undirected edges are stored once
/// with `u < v`; self-loops are not allowed and weights are positive.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    directedness: Directedness,
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedEdge {
    pub u: String,
    pub v: String,
    pub weight: f64,
}

impl WeightedGraph {
    pub fn new(directedness: Directedness) -> Self {
        WeightedGraph { directedness, nodes: BTreeSet::new(), edges: BTreeMap::new() }
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    pub fn is_directed(&self) -> bool {
        self.directedness == Directedness::Directed
    }

    pub fn add_node(&mut self, id: &str) {
        if !self.nodes.contains(id) {
            self.nodes.insert(id.to_owned());
        }
    }

    /// Adds `weight` to edge `(u, v)`, creating nodes and the edge as needed.
    pub fn add_edge(&mut self, u: &str, v: &str, weight: f64) -> Result<(), NetError> {
        if u == v {
            return Err(NetError::Input(format!("self-loop on {u:?}")));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(NetError::Input(format!("edge ({u}, {v}) weight must be positive, got {weight}")));
        }
        self.add_node(u);
        self.add_node(v);
        let key = self.key(u, v);
        *self.edges.entry(key).or_insert(0.0) += weight;
        Ok(())
    }

    fn key(&self, u: &str, v: &str) -> (String, String) {
        if self.directedness == Directedness::Undirected && v < u {
            (v.to_owned(), u.to_owned())
        } else {
            (u.to_owned(), v.to_owned())
        }
    }

    pub fn weight(&self, u: &str, v: &str) -> Option<f64> {
        self.edges.get(&self.key(u, v)).copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    /// Edges in canonical order: by `u`, then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.edges.iter().map(|((u, v), w)| (u.as_str(), v.as_str(), *w))
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    /// Sum of incident edge weights (in plus out for directed graphs).
    pub fn weighted_degrees(&self) -> BTreeMap<&str, f64> {
        let mut deg: BTreeMap<&str, f64> = self.nodes().map(|n| (n, 0.0)).collect();
        for (u, v, w) in self.edges() {
            *deg.get_mut(u).expect("endpoint is a node") += w;
            *deg.get_mut(v).expect("endpoint is a node") += w;
        }
        deg
    }

    /// Subgraph on `keep` with every edge whose endpoints both survive.
    pub fn induced(&self, keep: &BTreeSet<&str>) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.directedness);
        for n in self.nodes().filter(|n| keep.contains(n)) {
            g.add_node(n);
        }
        for ((u, v), w) in &self.edges {
            if keep.contains(u.as_str()) && keep.contains(v.as_str()) {
                g.edges.insert((u.clone(), v.clone()), *w);
            }
        }
        g
    }

    /// Dense adjacency (symmetric for undirected graphs) in the given order.
    pub fn adjacency_matrix(&self, order: &[String]) -> super::SquareMatrix {
        let index: BTreeMap<&str, usize> = order.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut values = vec![vec![0.0; order.len()]; order.len()];
        for (u, v, w) in self.edges() {
            if let (Some(&i), Some(&j)) = (index.get(u), index.get(v)) {
                values[i][j] = w;
                if !self.is_directed() {
                    values[j][i] = w;
                }
            }
        }
        super::SquareMatrix { labels: order.to_vec(), values }
    }

    /// Writes `u,v,weight` rows in canonical order.
    pub fn write_edge_csv<W: Write>(&self, out: W) -> Result<(), NetError> {
        write_edges(self.edges(), out)
    }

    pub fn read_edge_csv<R: Read>(directedness: Directedness, input: R) -> Result<Self, NetError> {
        let mut rdr = csv::Reader::from_reader(input);
        let header = rdr.headers().map_err(|e| NetError::Input(format!("edge list header: {e}")))?;
        if header.iter().collect::<Vec<_>>() != ["u", "v", "weight"] {
            return Err(NetError::Input("edge list header must be `u,v,weight`".into()));
        }
        let mut g = WeightedGraph::new(directedness);
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| NetError::Input(format!("edge list line {}: {e}", i + 2)))?;
            let w: f64 = rec[2]
                .parse()
                .map_err(|e| NetError::Input(format!("edge list line {}: weight {:?}: {e}", i + 2, &rec[2])))?;
            g.add_edge(&rec[0], &rec[1], w)?;
        }
        Ok(g)
    }
}

pub(crate) fn write_edges<'a, W: Write>(
    edges: impl Iterator<Item = (&'a str, &'a str, f64)>,
    out: W,
) -> Result<(), NetError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["u", "v", "weight"]).map_err(NetError::from)?;
    for (u, v, weight) in edges {
        w.write_record([u, v, &weight.to_string()]).map_err(NetError::from)?;
    }
    w.flush().map_err(|e| NetError::Io(e.to_string()))?;
    Ok(())
}

/// Index-based adjacency used by the centrality algorithms. Undirected edges
/// appear in both directions.
pub(crate) struct Adjacency {
    pub names: Vec<String>,
    pub out: Vec<Vec<(usize, f64)>>,
}

impl Adjacency {
    pub fn new(g: &WeightedGraph, binary: bool) -> Self {
        let names: Vec<String> = g.nodes.iter().cloned().collect();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut out = vec![Vec::new(); names.len()];
        for (u, v, w) in g.edges() {
            let w = if binary { 1.0 } else { w };
            let (i, j) = (index[u], index[v]);
            out[i].push((j, w));
            if !g.is_directed() {
                out[j].push((i, w));
            }
        }
        for list in &mut out {
            list.sort_by_key(|e| e.0);
        }
        Adjacency { names, out }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
}
