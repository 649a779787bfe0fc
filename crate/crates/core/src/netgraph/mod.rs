//! Retweet and co-mention networks, centrality, influencer selection,
//! degree-share filtering and tag similarity.

mod build;
mod centrality;
mod filter;
mod graph;
mod influencers;
mod similarity;

pub use build::{build_comention_network, build_retweet_network};
pub use centrality::{
    betweenness, centrality, closeness, pagerank, top_k_union, CentralityMetric, CentralityOptions, CentralityScores,
    PathLength,
};
pub use filter::{degree_share_filter, edge_weight_share_filter, kcore_filter, FilterRule};
pub use graph::{Directedness, WeightedEdge, WeightedGraph};
pub use influencers::{
    filter_influencers, load_profiles, parse_candidate_list, read_candidate_list, InfluencerCriteria,
    InfluencerSelection, ProfileRecord, RejectionReason,
};
pub use similarity::{matrix_pearson, tag_similarity_matrix, SimilarityMatrix, SquareMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NetError {
    #[error("{0}")]
    Input(String),
    #[error("unknown centrality metric {0:?} (pagerank|betweenness|closeness)")]
    UnknownMetric(String),
    #[error("empty graph")]
    EmptyGraph,
    #[error("degenerate matrix: {0}")]
    Degenerate(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<csv::Error> for NetError {
    fn from(e: csv::Error) -> Self {
        NetError::Io(e.to_string())
    }
}

fn check_fraction(theta: f64) -> Result<(), NetError> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(NetError::Input(format!("threshold must lie in (0, 1), got {theta}")))
    }
}
