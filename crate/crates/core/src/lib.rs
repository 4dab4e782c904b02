pub mod certify;
pub mod cut_matching;
pub mod dyadic;
pub mod error;
pub mod graph;
pub mod harness;
pub mod maxflow;
pub mod params;
pub mod steiner;
pub mod strong_partition;
pub mod terminal_decomp;
pub mod vertex_set;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use graph::{Cut, Edge, Graph, InducedSubgraph, VertexId};
pub use vertex_set::VertexSet;
