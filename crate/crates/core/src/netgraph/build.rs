use std::collections::BTreeSet;

use super::graph::{Directedness, WeightedGraph};
use crate::corpus::Corpus;

/// Every tweet mentioning `m >= 2` coins adds 1 to each of its `m choose 2`
/// coin pairs. Coins that only ever appear alone are not nodes.
pub fn build_comention_network(mentions: &[BTreeSet<String>]) -> WeightedGraph {
    let mut g = WeightedGraph::new(Directedness::Undirected);
    for set in mentions {
        let coins: Vec<&str> = set.iter().map(String::as_str).collect();
        for (i, a) in coins.iter().enumerate() {
            for b in &coins[i + 1..] {
                g.add_edge(a, b, 1.0).expect("distinct coins, unit weight");
            }
        }
    }
    g
}

/// Edge retweeter -> original author, weighted by retweet count. Self
/// retweets are dropped.
pub fn build_retweet_network(corpus: &Corpus) -> WeightedGraph {
    let mut g = WeightedGraph::new(Directedness::Directed);
    for t in corpus.iter() {
        if let Some(orig) = &t.retweeted_author_id {
            if *orig != t.author_id {
                g.add_edge(&t.author_id, orig, 1.0).expect("distinct authors, unit weight");
            }
        }
    }
    g
}
