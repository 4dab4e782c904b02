//! The cut-matching game on the terminal cut graph `H`: strong partition of
//! `H` as the cut player, CutOrFlow as the matching player, and trimming.

use serde::Serialize;

use crate::certify::DEFAULT_BRUTE_CAP;
use crate::dyadic::{ceil_log2, Dyadic};
use crate::error::{invalid, Error, Result};
use crate::graph::{Cut, Edge, Graph};
use crate::maxflow::{decompose_paths, FlowMeter, FlowNetwork, FlowResult};
use crate::params::StrengthParams;
use crate::strong_partition::{strength_s, strong_partition_with, refine_gamma};
use crate::vertex_set::VertexSet;

/// Tunable constants of the game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GameConfig {
    /// Must be `2^-j`.
    #[serde(serialize_with = "ser_dyadic")]
    pub psi: Dyadic,
    /// `L_max = ⌈c_L · log₂|T|⌉ + 2`.
    pub c_l: u32,
    /// `s = ⌈c_s · α² · ⌈log₂ n⌉²⌉`.
    #[serde(serialize_with = "ser_dyadic")]
    pub c_s: Dyadic,
    pub brute_cap: usize,
}

fn ser_dyadic<S: serde::Serializer>(d: &Dyadic, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_string())
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { psi: Dyadic::pow2_recip(6), c_l: 4, c_s: Dyadic::ONE, brute_cap: DEFAULT_BRUTE_CAP }
    }
}

/// Parameters of one game instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameParams {
    pub delta: u64,
    pub psi: Dyadic,
    pub l_max: u32,
    /// `L_max / ψ`, an integer.
    pub alpha: Dyadic,
    pub s: u128,
    pub gamma: Dyadic,
    /// `min(γ/2s, γ/6)`, rounded down to a power of two.
    pub kappa_trim: Dyadic,
    /// `max(2/κ + s, 3s)`.
    pub s_out: u128,
}

impl GameParams {
    /// `n` is the vertex count of the whole input graph, `terminals` the
    /// size of the game's terminal set.
    pub fn derive(n: usize, terminals: usize, delta: u64, cfg: &GameConfig) -> Result<Self> {
        if !cfg.psi.is_pow2_recip() || cfg.psi >= Dyadic::ONE {
            return invalid(format!("ψ = {} must be 2^-j with j ≥ 1", cfg.psi));
        }
        if cfg.c_l == 0 {
            return invalid("c_L must be positive");
        }
        let t = terminals.max(2) as u128;
        let tc = t
            .checked_pow(cfg.c_l)
            .ok_or_else(|| Error::Overflow("|T|^c_L".into()))?;
        let l_max = ceil_log2(tc) + 2;
        let alpha = Dyadic::from_int(l_max as u128 * (1u128 << cfg.psi.exponent()));
        let s = strength_s(alpha, n, cfg.c_s)?;
        let gamma = refine_gamma(alpha, s)?;
        let kappa_trim = gamma.halve(ceil_log2(s.saturating_mul(2).max(6)));
        let two_over_kappa = 1u128
            .checked_shl(kappa_trim.exponent() + 1)
            .filter(|_| kappa_trim.exponent() < 126)
            .ok_or_else(|| Error::Overflow("2/κ".into()))?;
        let s_out = two_over_kappa
            .checked_add(s)
            .map(|x| x.max(3 * s))
            .ok_or_else(|| Error::Overflow("s_out".into()))?;
        Ok(GameParams { delta, psi: cfg.psi, l_max, alpha, s, gamma, kappa_trim, s_out })
    }

    /// Strength guaranteed for a trimmed cluster.
    pub fn achieved(&self) -> StrengthParams {
        StrengthParams {
            s: self.s_out,
            delta: self.delta,
            gamma: self.kappa_trim,
            kappa: self.kappa_trim,
            psi: self.psi,
            alpha: self.alpha,
            l_max: self.l_max,
        }
    }
}

/// Outcome of CutOrFlow. Flow values live on a network whose capacities
/// are the real ones multiplied by `2^scale_exp`.
#[derive(Debug, Clone)]
pub struct CutOrFlow {
    pub flow: FlowResult,
    pub network: FlowNetwork,
    pub scale_exp: u32,
    pub source: usize,
    pub sink: usize,
    /// `U' ∖ {s}` for the inclusion-maximal min-cut source side `U'`.
    pub side: VertexSet,
    pub cut: Cut,
}

impl CutOrFlow {
    /// Exact flow value as a dyadic.
    pub fn value(&self) -> Dyadic {
        Dyadic::new(self.flow.value as u128, self.scale_exp)
    }

    pub fn is_proper(&self) -> bool {
        self.side.is_proper()
    }

    /// Flow paths as `(first terminal, last terminal, scaled capacity)`.
    pub fn matching(&self) -> Result<Vec<(usize, usize, u128)>> {
        let paths = decompose_paths(&self.network, &self.flow, self.source, self.sink)?;
        paths
            .into_iter()
            .map(|p| {
                let k = p.vertices.len();
                if k < 4 {
                    return Err(Error::Internal("flow path without two terminals".into()));
                }
                Ok((p.vertices[1], p.vertices[k - 2], p.capacity as u128))
            })
            .collect()
    }
}

/// Attaches a source to every terminal of `s_terminals` and a sink to every
/// other terminal, each with capacity `δ·κ`, and runs one max-flow.
pub fn cut_or_flow(
    g: &Graph,
    s_terminals: &VertexSet,
    kappa: Dyadic,
    delta: u64,
    meter: &FlowMeter,
) -> Result<CutOrFlow> {
    let n = g.vertex_count();
    let terminals = g.terminals();
    if s_terminals.is_empty() || !s_terminals.is_subset(terminals) || s_terminals == terminals {
        return invalid("source terminals must be a nonempty proper subset of T");
    }
    let e = kappa.exponent();
    if e >= 120 {
        return Err(Error::Overflow(format!("κ = {kappa} too small for exact flows")));
    }
    let scale: i128 = 1 << e;
    let aux = (kappa.numerator() as i128)
        .checked_mul(delta as i128)
        .ok_or_else(|| Error::Overflow("δκ".into()))?;
    let mut net = FlowNetwork::new(n);
    let mut total: i128 = 0;
    for edge in g.edges().iter().filter(|e| !e.is_loop()) {
        let c = (edge.w as i128)
            .checked_mul(scale)
            .ok_or_else(|| Error::Overflow("scaled edge weight".into()))?;
        total = total.checked_add(c).ok_or_else(|| Error::Overflow("scaled total".into()))?;
        net.add_undirected(edge.u, edge.v, c);
    }
    total
        .checked_add(aux.checked_mul(terminals.len() as i128 + 1).unwrap_or(i128::MAX))
        .filter(|t| *t < i128::MAX / 4)
        .ok_or_else(|| Error::Overflow("scaled network capacity".into()))?;
    let source = net.add_vertex();
    let sink = net.add_vertex();
    if aux > 0 {
        for t in terminals.iter() {
            if s_terminals.contains(t) {
                net.add_arc(source, t, aux);
            } else {
                net.add_arc(t, sink, aux);
            }
        }
    }
    let flow = meter.max_flow(&net, source, sink)?;
    let mut side = VertexSet::from_iter_in(n, flow.max_source_side.iter().filter(|&v| v < n));
    if side.intersection_len(terminals) == 0 {
        // only terminal-free pieces with no boundary: the sources are cut off
        side = VertexSet::new(n);
    }
    let cut = Cut::new(g, side.clone());
    Ok(CutOrFlow { flow, network: net, scale_exp: e, source, sink, side, cut })
}

/// Groups whole clusters into two sides, each of total size within
/// `[total/3, 2·total/3]`. Returns the cluster indices of the first group.
pub fn combine_bipartition(sizes: &[usize], total: usize) -> Result<Vec<usize>> {
    if sizes.iter().any(|&x| 3 * x > 2 * total) {
        return invalid("a cluster exceeds 2/3 of the total; trim instead");
    }
    if let Some(i) = sizes.iter().position(|&x| 3 * x >= total && 3 * x <= 2 * total) {
        return Ok(vec![i]);
    }
    let mut sum = 0;
    for (i, &x) in sizes.iter().enumerate() {
        sum += x;
        if 3 * sum > total {
            return Ok((0..=i).collect());
        }
    }
    invalid("cluster sizes do not sum to the total")
}

/// Trimming: CutOrFlow from `big_cluster` at `κ_trim`. Returns the source
/// side `U` and, when `Ū` is nonempty, the cut `(U, Ū)`.
pub fn trim(
    g: &Graph,
    big_cluster: &VertexSet,
    params: &GameParams,
    meter: &FlowMeter,
) -> Result<(VertexSet, Option<Cut>)> {
    let t = g.terminal_count();
    debug_assert!(3 * big_cluster.len() >= 2 * t, "trimming needs |C| ≥ 2|T|/3");
    if big_cluster == g.terminals() {
        // no sink edges: the whole graph is a minimum cut side
        return Ok((g.all_vertices(), None));
    }
    let cf = cut_or_flow(g, big_cluster, params.kappa_trim, params.delta, meter)?;
    if cf.side.is_full() {
        return Ok((cf.side, None));
    }
    if cf.side.is_empty() {
        return Err(Error::Internal("trimming left no terminals".into()));
    }
    let cut = cf.cut.clone();
    Ok((cf.side, Some(cut)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameResult {
    /// Certified cluster with `|U ∩ T| ≥ |T|/3`, plus the residual cut if any.
    Cluster { cluster: VertexSet, residual: Option<Cut> },
    /// Balanced ψδ-terminal-sparse cut, both sides with `≥ |T|/6` terminals.
    BalancedCut { cut: Cut },
}

/// Per-round trace, for invariant checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: u32,
    pub h_clusters: usize,
    pub largest_cluster: usize,
    /// Flow value times `1/ψ`.
    pub scaled_flow: u128,
    /// Weight added to `H` this round.
    pub matching_weight: u128,
    /// Largest weight added at a single terminal this round.
    pub max_matching_degree: u128,
}

#[derive(Debug, Clone)]
pub struct CutGameOutcome {
    pub result: GameResult,
    pub params: GameParams,
    pub params_achieved: StrengthParams,
    pub rounds: u32,
    pub flow_calls: u64,
    pub records: Vec<RoundRecord>,
    /// Final cut graph over local terminal ids.
    pub h_edges: Vec<Edge>,
}

/// Runs the game on `g` with its own terminal set. `n_global` is the vertex
/// count used for the `log n` factors.
pub fn cut_game(
    g: &Graph,
    delta: u64,
    cfg: &GameConfig,
    n_global: usize,
    meter: &FlowMeter,
) -> Result<CutGameOutcome> {
    let tlist = g.terminals().to_vec();
    let k = tlist.len();
    if k < 2 {
        return invalid("the cut game needs at least two terminals");
    }
    if delta == 0 {
        return invalid("δ must be positive");
    }
    let params = GameParams::derive(n_global.max(g.vertex_count()), k, delta, cfg)?;
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &t) in tlist.iter().enumerate() {
        local[t] = i;
    }
    let to_terminals = |ids: &mut dyn Iterator<Item = usize>| {
        VertexSet::from_iter_in(g.vertex_count(), ids.map(|i| tlist[i]))
    };
    let calls_before = meter.calls();
    let mut h_edges: Vec<Edge> = Vec::new();
    let mut records = Vec::new();
    for round in 1..=params.l_max {
        let h = Graph::assemble(k, h_edges.clone(), VertexSet::new(k));
        let sp = strong_partition_with(&h, delta, params.alpha, params.s, cfg.brute_cap)?;
        let clusters = &sp.partition.clusters;
        let sizes: Vec<usize> = clusters.iter().map(|c| c.len()).collect();
        let mut rec = RoundRecord {
            round,
            h_clusters: clusters.len(),
            largest_cluster: sizes.iter().copied().max().unwrap_or(0),
            scaled_flow: 0,
            matching_weight: 0,
            max_matching_degree: 0,
        };
        if let Some(i) = sizes.iter().position(|&x| 3 * x >= 2 * k) {
            let big = to_terminals(&mut clusters[i].iter());
            let (cluster, residual) = trim(g, &big, &params, meter)?;
            records.push(rec);
            return Ok(CutGameOutcome {
                result: GameResult::Cluster { cluster, residual },
                params,
                params_achieved: params.achieved(),
                rounds: round,
                flow_calls: meter.calls() - calls_before,
                records,
                h_edges,
            });
        }
        let group = combine_bipartition(&sizes, k)?;
        let mut side_a = VertexSet::new(g.vertex_count());
        for &i in &group {
            for v in clusters[i].iter() {
                side_a.insert(tlist[v]);
            }
        }
        let side_b = g.terminals().difference(&side_a);
        let c = if side_a.len() >= side_b.len() { side_a } else { side_b };
        let cf = cut_or_flow(g, &c, params.psi, delta, meter)?;
        // scaled by 1/ψ, the threshold |T|/6·δψ becomes |T|δ/6
        let scaled = cf.flow.value as u128;
        rec.scaled_flow = scaled;
        if 6 * scaled >= k as u128 * delta as u128 {
            let mut added = vec![0u128; k];
            for (a, b, cap) in cf.matching()? {
                let (la, lb) = (local[a], local[b]);
                if la == usize::MAX || lb == usize::MAX || c.contains(a) == c.contains(b) {
                    return Err(Error::Internal("matching edge does not cross the bipartition".into()));
                }
                let w = u64::try_from(cap).map_err(|_| Error::Overflow("cut graph weight".into()))?;
                h_edges.push(Edge { u: la, v: lb, w });
                added[la] += cap;
                added[lb] += cap;
                rec.matching_weight += cap;
            }
            rec.max_matching_degree = added.into_iter().max().unwrap_or(0);
            records.push(rec);
            continue;
        }
        records.push(rec);
        let cut = cf.cut;
        let inside = cut.side.intersection_len(g.terminals());
        if 6 * inside < k || 6 * (k - inside) < k {
            return Err(Error::Internal("small cut is not terminal-balanced".into()));
        }
        return Ok(CutGameOutcome {
            result: GameResult::BalancedCut { cut },
            params,
            params_achieved: params.achieved(),
            rounds: round,
            flow_calls: meter.calls() - calls_before,
            records,
            h_edges,
        });
    }
    Err(Error::RoundLimit { l_max: params.l_max, terminals: k })
}
