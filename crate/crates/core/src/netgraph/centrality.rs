use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{Adjacency, WeightedGraph};
use super::NetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityMetric {
    Pagerank,
    Betweenness,
    Closeness,
}

impl CentralityMetric {
    pub const ALL: [CentralityMetric; 3] =
        [CentralityMetric::Pagerank, CentralityMetric::Betweenness, CentralityMetric::Closeness];

    pub fn as_str(self) -> &'static str {
        match self {
            CentralityMetric::Pagerank => "pagerank",
            CentralityMetric::Betweenness => "betweenness",
            CentralityMetric::Closeness => "closeness",
        }
    }
}

impl std::str::FromStr for CentralityMetric {
    type Err = NetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pagerank" => Ok(CentralityMetric::Pagerank),
            "betweenness" => Ok(CentralityMetric::Betweenness),
            "closeness" => Ok(CentralityMetric::Closeness),
            other => Err(NetError::UnknownMetric(other.to_owned())),
        }
    }
}

/// How shortest paths are measured for betweenness and closeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathLength {
    /// Every edge is one hop; edge weights count parallel paths.
    #[default]
    Hops,
    /// Edge length is `1 / weight`; every path counts once.
    InverseWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CentralityOptions {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Treat every edge as weight 1.
    pub binarize: bool,
    pub path_length: PathLength,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 100_000,
            binarize: false,
            path_length: PathLength::Hops,
        }
    }
}

impl CentralityOptions {
    pub fn validate(&self) -> Result<(), NetError> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(NetError::Input(format!("damping must lie in (0, 1), got {}", self.damping)));
        }
        if !(self.tolerance > 0.0) {
            return Err(NetError::Input(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(NetError::Input("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityScores {
    pub metric: CentralityMetric,
    pub scores: BTreeMap<String, f64>,
}

impl CentralityScores {
    /// Node ids by descending score, ties by ascending id.
    pub fn ranking(&self) -> Vec<(&str, f64)> {
        let mut v: Vec<(&str, f64)> = self.scores.iter().map(|(k, s)| (k.as_str(), *s)).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

pub fn centrality(
    graph: &WeightedGraph,
    metric: CentralityMetric,
    options: &CentralityOptions,
) -> Result<CentralityScores, NetError> {
    options.validate()?;
    if graph.node_count() == 0 {
        return Err(NetError::EmptyGraph);
    }
    let adj = Adjacency::new(graph, options.binarize);
    let values = match metric {
        CentralityMetric::Pagerank => pagerank_raw(&adj, options),
        CentralityMetric::Betweenness => betweenness_raw(&adj, options.path_length, !graph.is_directed()),
        CentralityMetric::Closeness => closeness_raw(&adj, options.path_length),
    };
    Ok(CentralityScores { metric, scores: adj.names.iter().cloned().zip(values).collect() })
}

pub fn pagerank(graph: &WeightedGraph, options: &CentralityOptions) -> Result<CentralityScores, NetError> {
    centrality(graph, CentralityMetric::Pagerank, options)
}

pub fn betweenness(graph: &WeightedGraph, options: &CentralityOptions) -> Result<CentralityScores, NetError> {
    centrality(graph, CentralityMetric::Betweenness, options)
}

pub fn closeness(graph: &WeightedGraph, options: &CentralityOptions) -> Result<CentralityScores, NetError> {
    centrality(graph, CentralityMetric::Closeness, options)
}

fn pagerank_raw(adj: &Adjacency, options: &CentralityOptions) -> Vec<f64> {
    let n = adj.len();
    let nf = n as f64;
    let d = options.damping;
    let out_w: Vec<f64> = adj.out.iter().map(|l| l.iter().map(|e| e.1).sum()).collect();
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..options.max_iterations {
        let dangling: f64 = (0..n).filter(|&u| adj.out[u].is_empty()).map(|u| rank[u]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        next.iter_mut().for_each(|x| *x = base);
        for (u, list) in adj.out.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            let share = d * rank[u] / out_w[u];
            for &(v, w) in list {
                next[v] += share * w;
            }
        }
        let change: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < options.tolerance {
            break;
        }
    }
    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|x| *x /= total);
    rank
}

/// Single-source shortest paths with path counts, in Brandes' form.
struct Sssp {
    /// Settled nodes in non-decreasing distance order.
    order: Vec<usize>,
    dist: Vec<f64>,
    sigma: Vec<f64>,
    /// Predecessors with the number of parallel edges used to reach the node.
    preds: Vec<Vec<(usize, f64)>>,
}

fn sssp(adj: &Adjacency, s: usize, mode: PathLength) -> Sssp {
    let n = adj.len();
    let mut sp = Sssp {
        order: Vec::with_capacity(n),
        dist: vec![f64::INFINITY; n],
        sigma: vec![0.0; n],
        preds: vec![Vec::new(); n],
    };
    sp.dist[s] = 0.0;
    sp.sigma[s] = 1.0;
    match mode {
        PathLength::Hops => {
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                sp.order.push(v);
                let next = sp.dist[v] + 1.0;
                for &(w, mult) in &adj.out[v] {
                    if sp.dist[w].is_infinite() {
                        sp.dist[w] = next;
                        queue.push_back(w);
                    }
                    if sp.dist[w] == next {
                        sp.sigma[w] += sp.sigma[v] * mult;
                        sp.preds[w].push((v, mult));
                    }
                }
            }
        }
        PathLength::InverseWeight => {
            let mut settled = vec![false; n];
            let mut heap = BinaryHeap::from([Entry(0.0, s)]);
            while let Some(Entry(d, v)) = heap.pop() {
                if settled[v] || d > sp.dist[v] {
                    continue;
                }
                settled[v] = true;
                sp.order.push(v);
                for &(w, weight) in &adj.out[v] {
                    if settled[w] {
                        continue;
                    }
                    let alt = d + 1.0 / weight;
                    let tol = 1e-12 * alt.max(1.0);
                    if alt < sp.dist[w] - tol {
                        sp.dist[w] = alt;
                        sp.sigma[w] = sp.sigma[v];
                        sp.preds[w].clear();
                        sp.preds[w].push((v, 1.0));
                        heap.push(Entry(alt, w));
                    } else if (alt - sp.dist[w]).abs() <= tol {
                        sp.sigma[w] += sp.sigma[v];
                        sp.preds[w].push((v, 1.0));
                    }
                }
            }
        }
    }
    sp
}

/// Min-heap entry keyed on distance, then node index.
struct Entry(f64, usize);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

const SOURCE_CHUNK: usize = 16;

fn betweenness_raw(adj: &Adjacency, mode: PathLength, undirected: bool) -> Vec<f64> {
    let n = adj.len();
    let sources: Vec<usize> = (0..n).collect();
    // fixed chunks reduced in order, so the sum does not depend on thread count
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut delta = vec![0.0; n];
            for &s in chunk {
                let sp = sssp(adj, s, mode);
                delta.iter_mut().for_each(|x| *x = 0.0);
                for &w in sp.order.iter().rev() {
                    for &(v, mult) in &sp.preds[w] {
                        delta[v] += sp.sigma[v] * mult / sp.sigma[w] * (1.0 + delta[w]);
                    }
                    if w != s {
                        acc[w] += delta[w];
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for p in partials {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    if undirected {
        total.iter_mut().for_each(|x| *x /= 2.0);
    }
    total
}

fn closeness_raw(adj: &Adjacency, mode: PathLength) -> Vec<f64> {
    (0..adj.len())
        .into_par_iter()
        .map(|s| {
            let sp = sssp(adj, s, mode);
            let reached = sp.order.len() - 1;
            let sum: f64 = sp.order.iter().map(|&v| sp.dist[v]).sum();
            if reached == 0 {
                0.0
            } else {
                reached as f64 / sum
            }
        })
        .collect()
}

/// Union of the top `k` nodes of every score set; ties at the cut are broken
/// by ascending node id so exactly `min(k, nodes)` come from each set.
pub fn top_k_union(scores: &[CentralityScores], k: usize) -> Result<BTreeSet<String>, NetError> {
    if k == 0 {
        return Err(NetError::Input("k must be at least 1".into()));
    }
    let mut out = BTreeSet::new();
    for set in scores {
        out.extend(set.ranking().into_iter().take(k).map(|(id, _)| id.to_owned()));
    }
    Ok(out)
}
