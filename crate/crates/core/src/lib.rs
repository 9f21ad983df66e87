//! Ego-network structural encodings of graphs.
//!
//! * [`graph`]: compressed-row graphs, generators and bounded BFS.
//! * [`encode`]: node-centric and edge-centric quadruplet multisets.
//! * [`vectorize`]: sparse vectors and graph signatures.
//! * [`expressivity`]: 1-WL refinement, strongly regular graphs and
//!   distinguishability checks.
//! * [`layer`]: the learnable message-passing layer with exact gradients.

pub mod encode;
pub mod error;
pub mod expressivity;
pub mod graph;
pub mod layer;
pub mod vectorize;

pub use error::{Error, Result};
pub use graph::Graph;
pub use vectorize::Mode;
