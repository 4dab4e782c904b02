//! File formats, seeded instance generators and run statistics shared by the
//! command-line tool and the acceptance suite.

pub mod dimacs;
pub mod generate;
pub mod stats;

pub use dimacs::{emit_graph, parse_graph};
pub use generate::{generate, Family, GenSpec, Generated};
pub use stats::RunStats;
