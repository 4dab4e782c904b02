//! Minimum Steiner cut: λ̃ guessing, the unbalanced case via minimum
//! isolating cuts, and terminal sparsification over a terminal-strong
//! decomposition.

use std::collections::HashMap;

use serde::Serialize;

use crate::cut_matching::GameConfig;
use crate::dyadic::{ceil_log2, Dyadic};
use crate::error::{invalid, Error, Result};
use crate::graph::{Cut, Graph, VertexId};
use crate::maxflow::{FlowMeter, FlowNetwork};
use crate::terminal_decomp::{terminal_decomp, GameSummary, TerminalDecomposition};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct SolverConfig {
    pub game: GameConfig,
    /// Replaces `k = ⌈2s²/γ⌉`; exactness is then no longer guaranteed.
    pub k_override: Option<u128>,
}

/// How an unbalanced-case call found its cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnbalancedMethod {
    TwoTerminal,
    IsolatingCuts,
    NaivePairs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnbalancedOutcome {
    pub cut: Cut,
    pub method: UnbalancedMethod,
    pub flow_calls: u64,
}

/// Minimum cut separating `a` from `b` in `g` as a side containing `a`.
fn st_cut(g: &Graph, net: &FlowNetwork, a: VertexId, b: VertexId, meter: &FlowMeter) -> Result<Cut> {
    let r = meter.max_flow(net, a, b)?;
    let cut = Cut::new(g, r.source_side);
    debug_assert_eq!(cut.boundary_weight as i128, r.value);
    Ok(cut)
}

fn better(best: &mut Option<Cut>, cand: Cut) {
    if best.as_ref().is_none_or(|b| cand.boundary_weight < b.boundary_weight) {
        *best = Some(cand);
    }
}

/// Classical method: minimum cut between the first vertex of `set` and each
/// other one.
fn naive_pairs(g: &Graph, set: &[VertexId], meter: &FlowMeter) -> Result<Cut> {
    let net = FlowNetwork::from_graph(g);
    let mut best = None;
    for &t in &set[1..] {
        better(&mut best, st_cut(g, &net, set[0], t, meter)?);
    }
    best.ok_or_else(|| Error::Internal("no terminal pair".into()))
}

/// For each `r ∈ R`, a minimum cut separating `r` from `R ∖ {r}`, using
/// `⌈log₂|R|⌉` bipartition flows and one combined flow. Returns the best.
pub fn isolating_cuts(g: &Graph, r: &[VertexId], meter: &FlowMeter) -> Result<Cut> {
    let k = r.len();
    if k < 2 {
        return invalid("isolating cuts need at least two vertices");
    }
    let n = g.vertex_count();
    let net = FlowNetwork::from_graph(g);
    if k == 2 {
        return st_cut(g, &net, r[0], r[1], meter);
    }
    let inf = g.total_weight() as i128 + 1;
    // bit b of label[v] records the side of v in bipartition b
    let mut label: Vec<u64> = vec![0; n];
    let bits = ceil_log2(k as u128);
    for b in 0..bits {
        let mut net_b = net.clone();
        let s = net_b.add_vertex();
        let t = net_b.add_vertex();
        for (j, &x) in r.iter().enumerate() {
            if (j >> b) & 1 == 1 {
                net_b.add_arc(s, x, inf);
            } else {
                net_b.add_arc(x, t, inf);
            }
        }
        let f = meter.max_flow(&net_b, s, t)?;
        for (v, l) in label.iter_mut().enumerate() {
            if f.source_side.contains(v) {
                *l |= 1 << b;
            }
        }
    }
    // S_j = vertices whose side pattern equals j's bit pattern
    let mut combined = FlowNetwork::new(n);
    let s = combined.add_vertex();
    let t = combined.add_vertex();
    let owner: Vec<Option<usize>> = {
        let by_label: HashMap<u64, usize> = r.iter().enumerate().map(|(j, &x)| (label[x], j)).collect();
        (0..n).map(|v| by_label.get(&label[v]).copied()).collect()
    };
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        let w = e.w as i128;
        if owner[e.u].is_some() && owner[e.u] == owner[e.v] {
            combined.add_undirected(e.u, e.v, w);
            continue;
        }
        for x in [e.u, e.v] {
            if owner[x].is_some() {
                combined.add_arc(x, t, w);
            }
        }
    }
    for &x in r {
        combined.add_arc(s, x, inf);
    }
    let f = meter.max_flow(&combined, s, t)?;
    let mut best = None;
    for (j, &x) in r.iter().enumerate() {
        let side = VertexSet::from_iter_in(n, f.source_side.iter().filter(|&v| v < n && owner[v] == Some(j)));
        debug_assert!(side.contains(x));
        better(&mut best, Cut::new(g, side));
    }
    Ok(best.unwrap())
}

fn first_primes(count: usize) -> Vec<usize> {
    let mut ps: Vec<usize> = Vec::with_capacity(count);
    let mut c = 2;
    while ps.len() < count {
        if ps.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            ps.push(c);
        }
        c += 1;
    }
    ps
}

fn isolating_cost(size: usize) -> u128 {
    if size == 2 {
        1
    } else {
        ceil_log2(size as u128) as u128 + 1
    }
}

/// Sets `R ⊆ U` such that every `A ⊆ U` with `1 ≤ |A| ≤ k` and `A ≠ U` has
/// some `R` meeting `A` in exactly one element and containing a vertex
/// outside `A`. Returns `None` once the isolating-cut cost reaches `budget`.
fn isolating_family(u: &[VertexId], k: u128, budget: u128) -> Option<Vec<Vec<VertexId>>> {
    let mut family = vec![u.to_vec()];
    let mut cost = isolating_cost(u.len());
    if cost >= budget {
        return None;
    }
    if k <= 1 {
        return Some(family);
    }
    let m = u.len();
    let primes = (k - 1)
        .checked_mul(ceil_log2(m as u128) as u128)
        .and_then(|x| x.checked_add(1))
        .filter(|&x| x <= budget)?;
    let extra = k.min(m as u128) as usize;
    for p in first_primes(primes as usize) {
        for res in 0..p.min(m) {
            let class: Vec<VertexId> = (res..m).step_by(p).map(|i| u[i]).collect();
            let outside: Vec<VertexId> =
                (0..m).filter(|i| i % p != res).map(|i| u[i]).take(extra).collect();
            let mut push = |set: Vec<VertexId>| {
                if set.len() >= 2 {
                    cost += isolating_cost(set.len());
                    family.push(set);
                }
            };
            push(class.clone());
            for &b in &outside {
                let mut set = class.clone();
                set.push(b);
                push(set);
            }
            if cost >= budget {
                return None;
            }
        }
    }
    Some(family)
}

/// Finds a minimum Steiner cut whenever some minimum Steiner cut has between
/// 1 and `k` vertices of `u_set` on its smaller side; otherwise returns the
/// best cut separating `u_set` that it saw.
pub fn unbalanced_case(g: &Graph, u_set: &VertexSet, k: u128, meter: &FlowMeter) -> Result<UnbalancedOutcome> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let u = u_set.to_vec();
    if u.len() < 2 {
        return invalid("the unbalanced case needs at least two terminals");
    }
    let before = meter.calls();
    if u.len() == 2 {
        let net = FlowNetwork::from_graph(g);
        let cut = st_cut(g, &net, u[0], u[1], meter)?;
        return Ok(UnbalancedOutcome { cut, method: UnbalancedMethod::TwoTerminal, flow_calls: meter.calls() - before });
    }
    let naive_cost = u.len() as u128 - 1;
    let (cut, method) = match isolating_family(&u, k, naive_cost) {
        Some(family) => {
            let mut best = None;
            for r in &family {
                better(&mut best, isolating_cuts(g, r, meter)?);
            }
            (best.unwrap(), UnbalancedMethod::IsolatingCuts)
        }
        None => (naive_pairs(g, &u, meter)?, UnbalancedMethod::NaivePairs),
    };
    Ok(UnbalancedOutcome { cut, method, flow_calls: meter.calls() - before })
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SparsifyClassification {
    pub trivial: Vec<usize>,
    pub small: Vec<usize>,
    pub large: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifyOutcome {
    pub selected: VertexSet,
    pub classification: SparsifyClassification,
}

/// Keeps the lowest `u_set` vertex of every small cluster and the lowest
/// `s + 1` of every large one, without the size check.
pub fn sparsify_select(clusters: &[VertexSet], u_set: &VertexSet, s: u128) -> SparsifyOutcome {
    let s2 = s.saturating_mul(s);
    let mut class = SparsifyClassification::default();
    let mut selected = VertexSet::new(u_set.universe());
    for (i, c) in clusters.iter().enumerate() {
        let ui = c.intersection(u_set);
        let size = ui.len() as u128;
        if size == 0 {
            class.trivial.push(i);
        } else if size <= s2 {
            class.small.push(i);
            selected.insert(ui.first().unwrap());
        } else {
            class.large.push(i);
            let take = s.saturating_add(1).min(size) as usize;
            for v in ui.iter().take(take) {
                selected.insert(v);
            }
        }
    }
    SparsifyOutcome { selected, classification: class }
}

/// [`sparsify_select`], failing when more than half of `u_set` is kept.
pub fn sparsify(clusters: &[VertexSet], u_set: &VertexSet, s: u128) -> Result<SparsifyOutcome> {
    let out = sparsify_select(clusters, u_set, s);
    if 2 * out.selected.len() > u_set.len() {
        return Err(Error::SparsifyTooLarge { kept: out.selected.len(), total: u_set.len() });
    }
    Ok(out)
}

/// `k = ⌈2s²/γ⌉`, saturating.
pub fn balance_threshold(s: u128, gamma: Dyadic) -> u128 {
    let e = gamma.exponent();
    let two_s2 = s.saturating_mul(s).saturating_mul(2);
    let scaled = if e >= 128 { u128::MAX } else { two_s2.checked_shl(e).filter(|x| x >> e == two_s2).unwrap_or(u128::MAX) };
    if scaled == u128::MAX {
        return u128::MAX;
    }
    let num = gamma.numerator();
    scaled.div_ceil(num)
}

/// One inner iteration of the solver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationRecord {
    pub u_size: usize,
    pub unbalanced_value: u64,
    pub unbalanced_method: UnbalancedMethod,
    pub memoized: bool,
    pub clusters: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuessRecord {
    pub guess: u64,
    pub iterations: Vec<IterationRecord>,
    /// Sparsification kept more than half and the guess fell back to the
    /// classical method.
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct SteinerResult {
    pub best_cut: Cut,
    pub value: u64,
    pub lambda_guess_used: Option<u64>,
    pub flow_calls: u64,
    pub batched_flow_calls: u64,
    pub k: u128,
    pub iterations: Vec<GuessRecord>,
    pub games: Vec<GameSummary>,
    pub recursion_depth: u32,
}

impl SteinerResult {
    pub fn fallback_used(&self) -> bool {
        self.iterations.iter().any(|g| g.fallback)
    }
}

fn require_terminals(g: &Graph) -> Result<()> {
    if g.terminal_count() < 2 {
        return invalid("a Steiner cut needs at least two terminals");
    }
    Ok(())
}

/// The classical `|T| − 1` flow method from the lowest-id terminal.
pub fn naive_steiner_cut(g: &Graph) -> Result<SteinerResult> {
    require_terminals(g)?;
    let meter = FlowMeter::new();
    let cut = naive_pairs(g, &g.terminals().to_vec(), &meter)?;
    Ok(SteinerResult {
        value: cut.boundary_weight,
        best_cut: cut,
        lambda_guess_used: None,
        flow_calls: meter.calls(),
        batched_flow_calls: meter.calls(),
        k: 0,
        iterations: Vec::new(),
        games: Vec::new(),
        recursion_depth: 0,
    })
}

pub fn min_steiner_cut(g: &Graph) -> Result<SteinerResult> {
    min_steiner_cut_with(g, &SolverConfig::default())
}

/// Tries every `λ̃ = 2^i`; per guess alternates the unbalanced case with
/// decomposition and sparsification until `|U| ≤ k`.
pub fn min_steiner_cut_with(g: &Graph, cfg: &SolverConfig) -> Result<SteinerResult> {
    require_terminals(g)?;
    let meter = FlowMeter::new();
    let terminals = g.terminals().clone();
    let top = crate::cut_matching::GameParams::derive(g.vertex_count(), terminals.len(), 1, &cfg.game)?;
    let k = cfg.k_override.unwrap_or_else(|| balance_threshold(top.s_out, top.kappa_trim)).max(1);
    let guesses = ceil_log2(g.total_weight().max(1) as u128);
    let mut memo: HashMap<VertexSet, UnbalancedOutcome> = HashMap::new();
    let mut best: Option<(Cut, u64)> = None;
    let mut batched = 0u64;
    let mut records = Vec::new();
    let mut games = Vec::new();
    let mut depth = 0;
    for i in 0..=guesses {
        let guess = 1u64 << i;
        let mut rec = GuessRecord { guess, iterations: Vec::new(), fallback: false };
        let mut u = terminals.clone();
        loop {
            let memoized = memo.contains_key(&u);
            if !memoized {
                let out = unbalanced_case(g, &u, k, &meter)?;
                batched += out.flow_calls;
                memo.insert(u.clone(), out);
            }
            let out = &memo[&u];
            if best.as_ref().is_none_or(|(b, _)| out.cut.boundary_weight < b.boundary_weight) {
                best = Some((out.cut.clone(), guess));
            }
            let mut it = IterationRecord {
                u_size: u.len(),
                unbalanced_value: out.cut.boundary_weight,
                unbalanced_method: out.method,
                memoized,
                clusters: None,
            };
            if (u.len() as u128) <= k {
                rec.iterations.push(it);
                break;
            }
            let gu = g.with_terminals(&u);
            let d: TerminalDecomposition = terminal_decomp(&gu, &gu.all_vertices(), guess, &cfg.game, &meter)?;
            batched += d.batched_flow_calls;
            depth = depth.max(d.recursion_depth);
            games.extend(d.games.iter().cloned());
            it.clusters = Some(d.clusters.len());
            rec.iterations.push(it);
            match sparsify(&d.cluster_sets(), &u, d.params.s) {
                Ok(sp) if sp.selected.len() >= 2 => u = sp.selected,
                Ok(_) => break,
                Err(Error::SparsifyTooLarge { .. }) => {
                    rec.fallback = true;
                    let before = meter.calls();
                    let cut = naive_pairs(g, &terminals.to_vec(), &meter)?;
                    batched += meter.calls() - before;
                    if best.as_ref().is_none_or(|(b, _)| cut.boundary_weight < b.boundary_weight) {
                        best = Some((cut, guess));
                    }
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        records.push(rec);
    }
    let (best_cut, guess) = best.ok_or_else(|| Error::Internal("no cut found".into()))?;
    debug_assert!(g.is_steiner_side(&best_cut.side));
    Ok(SteinerResult {
        value: best_cut.boundary_weight,
        best_cut,
        lambda_guess_used: Some(guess),
        flow_calls: meter.calls(),
        batched_flow_calls: batched,
        k,
        iterations: records,
        games,
        recursion_depth: depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn dumbbell() -> Graph {
        let es = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
            .iter()
            .map(|&(u, v)| Edge { u, v, w: 1 })
            .collect();
        Graph::new(6, es, [0, 5]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, vec![Edge { u: 0, v: 1, w: 1 }, Edge { u: 1, v: 2, w: 1 }, Edge { u: 0, v: 2, w: 1 }], 0..3)
            .unwrap()
    }

    fn star() -> Graph {
        Graph::new(10, (1..10).map(|v| Edge { u: 0, v, w: 1 }).collect(), 1..10).unwrap()
    }

    #[test]
    fn unbalanced_examples() {
        let g = dumbbell();
        let m = FlowMeter::new();
        let out = unbalanced_case(&g, g.terminals(), 1, &m).unwrap();
        assert_eq!(out.cut.boundary_weight, 1);
        assert_eq!(out.flow_calls, 1);
        let g = star();
        let out = unbalanced_case(&g, g.terminals(), 1, &m).unwrap();
        assert_eq!(out.cut.boundary_weight, 1);
        assert_eq!(out.method, UnbalancedMethod::IsolatingCuts);
        assert!(unbalanced_case(&g, &VertexSet::from_iter_in(10, [1]), 1, &m).is_err());
    }

    #[test]
    fn isolating_cuts_find_the_light_terminal() {
        // path 0-1-2-3 with a heavy tail: terminal 0 hangs on a unit edge
        let g = Graph::new(
            4,
            vec![Edge { u: 0, v: 1, w: 1 }, Edge { u: 1, v: 2, w: 9 }, Edge { u: 2, v: 3, w: 9 }],
            [0, 2, 3],
        )
        .unwrap();
        let cut = isolating_cuts(&g, &[0, 2, 3], &FlowMeter::new()).unwrap();
        assert_eq!(cut.boundary_weight, 1);
    }

    #[test]
    fn family_covers_small_sets() {
        let u: Vec<usize> = (0..12).collect();
        let fam = isolating_family(&u, 3, u128::MAX).unwrap();
        // every A with 1 ≤ |A| ≤ 3 is isolated by some R
        for mask in 1u32..(1 << 12) {
            if mask.count_ones() > 3 {
                continue;
            }
            let ok = fam.iter().any(|r| {
                let hit = r.iter().filter(|&&x| mask >> x & 1 == 1).count();
                hit == 1 && r.iter().any(|&x| mask >> x & 1 == 0)
            });
            assert!(ok, "mask {mask:b}");
        }
    }

    #[test]
    fn sparsify_examples() {
        let u = VertexSet::from_iter_in(8, 0..8);
        let clusters = vec![VertexSet::from_iter_in(8, 0..8)];
        let sp = sparsify(&clusters, &u, 3).unwrap();
        assert_eq!(sp.selected.to_vec(), vec![0]);
        assert_eq!(sp.classification.small, vec![0]);

        let u = VertexSet::from_iter_in(12, 0..12);
        let clusters = vec![VertexSet::from_iter_in(12, 0..6), VertexSet::from_iter_in(12, 6..12)];
        let sp = sparsify(&clusters, &u, 2).unwrap();
        assert_eq!(sp.selected.len(), 6);
        assert_eq!(sp.classification.large, vec![0, 1]);
        let u11 = VertexSet::from_iter_in(12, 0..11);
        assert!(matches!(sparsify(&clusters, &u11, 2), Err(Error::SparsifyTooLarge { .. })));
    }

    #[test]
    fn k_formula() {
        assert_eq!(balance_threshold(2, Dyadic::pow2_recip(3)), 64);
        assert_eq!(balance_threshold(1, Dyadic::ONE), 2);
        assert_eq!(balance_threshold(1 << 70, Dyadic::pow2_recip(3)), u128::MAX);
    }

    #[test]
    fn solver_examples() {
        let r = min_steiner_cut(&dumbbell()).unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.best_cut.side.len(), 3);
        let r = min_steiner_cut(&triangle()).unwrap();
        assert_eq!(r.value, 2);
        let g = Graph::new(4, vec![Edge { u: 0, v: 1, w: 3 }, Edge { u: 2, v: 3, w: 3 }], [0, 3]).unwrap();
        assert_eq!(min_steiner_cut(&g).unwrap().value, 0);
    }

    #[test]
    fn naive_examples() {
        let r = naive_steiner_cut(&dumbbell()).unwrap();
        assert_eq!((r.value, r.flow_calls), (1, 1));
        let r = naive_steiner_cut(&triangle()).unwrap();
        assert_eq!((r.value, r.flow_calls), (2, 2));
        assert!(naive_steiner_cut(&Graph::new(2, vec![], [0]).unwrap()).is_err());
    }
}
