//! Trading-signal analytics for crypto tweet corpora.

pub mod corpus;
pub mod econometrics;
pub mod netgraph;
pub mod pipeline;
pub mod signals;
