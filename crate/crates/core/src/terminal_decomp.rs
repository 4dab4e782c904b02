//! Recursive terminal-strong decomposition driven by the cut-matching game.

use serde::Serialize;

use crate::certify::certify_clusters;
use crate::cut_matching::{cut_game, GameConfig, GameParams, GameResult};
use crate::dyadic::floor_log2;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::maxflow::FlowMeter;
use crate::params::StrengthParams;
use crate::strong_partition::intercluster_weight;
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompCluster {
    pub vertices: VertexSet,
    /// Strength certified by the game; `None` when the cluster holds at most
    /// one terminal and is strong vacuously.
    pub params: Option<StrengthParams>,
    pub depth: u32,
}

/// One cut game run during the recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameSummary {
    pub depth: u32,
    pub terminals: usize,
    pub rounds: u32,
    pub l_max: u32,
    pub balanced_cut: bool,
    /// Smaller terminal count of the returned cut, if any.
    pub smaller_side_terminals: Option<usize>,
    pub flow_calls: u64,
}

#[derive(Debug, Clone)]
pub struct TerminalDecomposition {
    pub clusters: Vec<DecompCluster>,
    pub intercluster_weight: u64,
    /// Parameters every cluster satisfies: those of the top-level game.
    pub params: StrengthParams,
    pub recursion_depth: u32,
    pub depth_bound: u32,
    pub flow_calls_used: u64,
    /// Flows if all games on one recursion level ran as a single batched call.
    pub batched_flow_calls: u64,
    pub games: Vec<GameSummary>,
    pub delta: u64,
    pub terminal_count: usize,
}

impl TerminalDecomposition {
    pub fn cluster_sets(&self) -> Vec<VertexSet> {
        self.clusters.iter().map(|c| c.vertices.clone()).collect()
    }

    /// `ψ·δ·|T|·⌊log₂|T|⌋ ≥ weight`, compared exactly.
    pub fn within_charging_bound(&self) -> bool {
        charging_bound_holds(self.intercluster_weight, self.params.psi.exponent(), self.delta, self.terminal_count)
    }
}

fn charging_bound_holds(weight: u64, psi_exp: u32, delta: u64, terminals: usize) -> bool {
    if terminals < 2 {
        return weight == 0;
    }
    let rhs = delta as u128 * terminals as u128 * floor_log2(terminals as u128) as u128;
    match (weight as u128).checked_shl(psi_exp) {
        Some(lhs) if psi_exp < 64 => lhs <= rhs,
        _ => weight == 0,
    }
}

/// Smallest `d` with `6^d ≥ t·5^d`, plus one.
pub fn depth_bound(t: usize) -> u32 {
    let t = t.max(1) as u128;
    let (mut six, mut five, mut d) = (1u128, 1u128, 0u32);
    loop {
        match five.checked_mul(t) {
            Some(rhs) if six >= rhs => return d + 1,
            Some(_) => {}
            None => return ((t as f64).ln() / 1.2f64.ln()).ceil() as u32 + 1,
        }
        match (six.checked_mul(6), five.checked_mul(5)) {
            (Some(a), Some(b)) => (six, five) = (a, b),
            _ => return ((t as f64).ln() / 1.2f64.ln()).ceil() as u32 + 1,
        }
        d += 1;
    }
}

struct Recursion<'a> {
    g: &'a Graph,
    delta: u64,
    cfg: &'a GameConfig,
    meter: &'a FlowMeter,
    bound: u32,
    clusters: Vec<DecompCluster>,
    games: Vec<GameSummary>,
    level_max: Vec<u64>,
    max_depth: u32,
}

impl Recursion<'_> {
    fn run(&mut self, cluster: VertexSet, depth: u32) -> Result<()> {
        let g = self.g;
        let tc = cluster.intersection_len(g.terminals());
        self.max_depth = self.max_depth.max(depth);
        if tc <= 1 {
            self.clusters.push(DecompCluster { vertices: cluster, params: None, depth });
            return Ok(());
        }
        if depth > self.bound {
            return Err(Error::RecursionDepth { depth, bound: self.bound });
        }
        let sub = g.induced_subgraph(&cluster)?;
        let out = cut_game(&sub.graph, self.delta, self.cfg, g.vertex_count(), self.meter)?;
        if self.level_max.len() <= depth as usize {
            self.level_max.resize(depth as usize + 1, 0);
        }
        let lm = &mut self.level_max[depth as usize];
        *lm = (*lm).max(out.flow_calls);
        let n = g.vertex_count();
        let mut summary = GameSummary {
            depth,
            terminals: tc,
            rounds: out.rounds,
            l_max: out.params.l_max,
            balanced_cut: false,
            smaller_side_terminals: None,
            flow_calls: out.flow_calls,
        };
        match out.result {
            GameResult::Cluster { cluster: u, residual } => {
                let u = sub.lift(&u, n);
                if let Some(cut) = residual {
                    let inside = cut.side.intersection_len(sub.graph.terminals());
                    summary.smaller_side_terminals = Some(inside.min(tc - inside));
                }
                self.games.push(summary);
                let rest = cluster.difference(&u);
                self.clusters.push(DecompCluster { vertices: u, params: Some(out.params_achieved), depth });
                if !rest.is_empty() {
                    self.run(rest, depth + 1)?;
                }
            }
            GameResult::BalancedCut { cut } => {
                let side = sub.lift(&cut.side, n);
                let inside = side.intersection_len(g.terminals());
                let smaller = inside.min(tc - inside);
                summary.balanced_cut = true;
                summary.smaller_side_terminals = Some(smaller);
                self.games.push(summary);
                if 6 * smaller < tc {
                    return Err(Error::Internal("recursion on an unbalanced cut".into()));
                }
                let other = cluster.difference(&side);
                self.run(side, depth + 1)?;
                self.run(other, depth + 1)?;
            }
        }
        Ok(())
    }
}

/// Decomposes `cluster` (with the graph's terminals inside it) into
/// terminal-strong clusters at scale `δ`.
pub fn terminal_decomp(
    g: &Graph,
    cluster: &VertexSet,
    delta: u64,
    cfg: &GameConfig,
    meter: &FlowMeter,
) -> Result<TerminalDecomposition> {
    if cluster.universe() != g.vertex_count() {
        return invalid("cluster is over a different vertex universe");
    }
    if delta == 0 {
        return invalid("δ must be positive");
    }
    let t = cluster.intersection_len(g.terminals());
    let top = GameParams::derive(g.vertex_count(), t, delta, cfg)?;
    let calls_before = meter.calls();
    let mut rec = Recursion {
        g,
        delta,
        cfg,
        meter,
        bound: depth_bound(t),
        clusters: Vec::new(),
        games: Vec::new(),
        level_max: Vec::new(),
        max_depth: 0,
    };
    if !cluster.is_empty() {
        rec.run(cluster.clone(), 0)?;
    }
    let sets: Vec<VertexSet> = rec.clusters.iter().map(|c| c.vertices.clone()).collect();
    Ok(TerminalDecomposition {
        intercluster_weight: intercluster_weight(g, &sets),
        clusters: rec.clusters,
        params: top.achieved(),
        recursion_depth: rec.max_depth,
        depth_bound: rec.bound,
        flow_calls_used: meter.calls() - calls_before,
        batched_flow_calls: rec.level_max.iter().sum(),
        games: rec.games,
        delta,
        terminal_count: t,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    Overlap,
    Uncovered,
    Weight { stored: u64, recomputed: u64 },
    WeightBound { weight: u64 },
    NotStrong { cluster: usize, witness: Option<VertexSet> },
    NotCertified { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub findings: Vec<Finding>,
    /// Whether clusters were certified by enumeration.
    pub certified: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.findings.iter().all(|f| matches!(f, Finding::NotCertified { .. }))
    }
}

/// Checks cover, weights and the charging bound, and certifies every
/// cluster by enumeration when `g` is within `cap`.
pub fn verify_decomposition(g: &Graph, d: &TerminalDecomposition, cap: usize) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut seen = VertexSet::new(g.vertex_count());
    for c in &d.clusters {
        if !c.vertices.is_disjoint(&seen) {
            report.findings.push(Finding::Overlap);
        }
        seen = seen.union(&c.vertices);
    }
    if !seen.is_full() {
        report.findings.push(Finding::Uncovered);
    }
    let sets = d.cluster_sets();
    let recomputed = intercluster_weight(g, &sets);
    if recomputed != d.intercluster_weight {
        report.findings.push(Finding::Weight { stored: d.intercluster_weight, recomputed });
    }
    if !charging_bound_holds(recomputed, d.params.psi.exponent(), d.delta, d.terminal_count) {
        report.findings.push(Finding::WeightBound { weight: recomputed });
    }
    let jobs: Vec<(usize, (VertexSet, StrengthParams))> = d
        .clusters
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.params.map(|p| (i, (c.vertices.clone(), p))))
        .collect();
    let list: Vec<(VertexSet, StrengthParams)> = jobs.iter().map(|(_, j)| j.clone()).collect();
    match certify_clusters(g, &list, true, cap) {
        Ok(certs) => {
            report.certified = true;
            for ((i, _), cert) in jobs.iter().zip(certs) {
                if !cert.holds {
                    report.findings.push(Finding::NotStrong { cluster: *i, witness: cert.witness });
                }
            }
        }
        Err(e) => report.findings.push(Finding::NotCertified { reason: e.to_string() }),
    }
    report
}
