use serde::Serialize;

use crate::steiner::SteinerResult;

/// Per-run counters emitted as JSON by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub flow_calls_individual: u64,
    pub flow_calls_batched_by_level: u64,
    pub rounds_per_game: Vec<u32>,
    pub recursion_depth: u32,
    pub wall_time_ms: u64,
    pub result_value: u64,
}

impl RunStats {
    pub fn from_result(r: &SteinerResult, wall_time_ms: u64) -> Self {
        RunStats {
            flow_calls_individual: r.flow_calls,
            flow_calls_batched_by_level: r.batched_flow_calls,
            rounds_per_game: r.games.iter().map(|g| g.rounds).collect(),
            recursion_depth: r.recursion_depth,
            wall_time_ms,
            result_value: r.value,
        }
    }
}
