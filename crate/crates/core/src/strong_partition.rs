//! Partitions into `(s, αδ, γ)`-strong clusters: pendant augmentation, a
//! base `(s₀, δ₀, 0)`-strong splitter, and the contraction/removal
//! refinement that raises γ.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::certify::{walk_cuts, DEFAULT_BRUTE_CAP};
use crate::dyadic::{ceil_log2, Dyadic};
use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph};
use crate::vertex_set::VertexSet;

/// How a base cluster was shown to admit no violating cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseCertificate {
    /// Cluster volume below `2(s₀ + 1)`, so no cut can be volume-large on both sides.
    VolumeBound,
    /// Every cut of the graph was enumerated.
    Exhaustive,
    /// Above the enumeration cap; split heuristically along minimum cuts.
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub clusters: Vec<VertexSet>,
    pub intercluster_weight: u64,
    pub certificates: Vec<BaseCertificate>,
}

impl Partition {
    pub fn new(g: &Graph, clusters: Vec<VertexSet>, certificates: Vec<BaseCertificate>) -> Self {
        debug_assert_eq!(clusters.len(), certificates.len());
        let intercluster_weight = intercluster_weight(g, &clusters);
        Partition { clusters, intercluster_weight, certificates }
    }

    pub fn is_verified(&self) -> bool {
        self.certificates.iter().all(|c| *c != BaseCertificate::Unverified)
    }

    /// Checks disjointness, that the clusters cover `within`, and the stored weight.
    pub fn validate(&self, g: &Graph, within: &VertexSet) -> Result<()> {
        let mut seen = VertexSet::new(g.vertex_count());
        for c in &self.clusters {
            if c.is_empty() || !c.is_disjoint(&seen) {
                return Err(Error::Internal("clusters empty or overlapping".into()));
            }
            seen = seen.union(c);
        }
        if &seen != within {
            return Err(Error::Internal("clusters do not cover the vertex set".into()));
        }
        if intercluster_weight(g, &self.clusters) != self.intercluster_weight {
            return Err(Error::Internal("stored intercluster weight is stale".into()));
        }
        Ok(())
    }
}

/// Weight of edges whose endpoints lie in two different clusters.
pub fn intercluster_weight(g: &Graph, clusters: &[VertexSet]) -> u64 {
    let mut owner = vec![usize::MAX; g.vertex_count()];
    for (i, c) in clusters.iter().enumerate() {
        for v in c.iter() {
            owner[v] = i;
        }
    }
    g.edges()
        .iter()
        .filter(|e| {
            let (a, b) = (owner[e.u], owner[e.v]);
            a != usize::MAX && b != usize::MAX && a != b
        })
        .map(|e| e.w)
        .sum()
}

/// `G₀`: each vertex `v` gains a pendant `n + v` joined by an edge of `weight`.
pub fn augment_pendants(g: &Graph, weight: u64) -> Result<Graph> {
    if weight == 0 {
        return invalid("pendant weight must be positive");
    }
    let n = g.vertex_count();
    let mut edges = g.edges().to_vec();
    edges.extend((0..n).map(|v| Edge { u: v, v: n + v, w: weight }));
    let terminals = VertexSet::from_iter_in(2 * n, g.terminals().iter());
    Ok(Graph::assemble(2 * n, edges, terminals))
}

/// Searches all cuts of `g` for one of weight `≤ delta0` with both
/// volume-intersections with `cluster` above `s0`.
fn violating_cut(g: &Graph, cluster: &VertexSet, delta0: u64, s0: u128, cap: usize) -> Result<Option<VertexSet>> {
    let vol_total: u128 = cluster.iter().map(|v| g.degree(v) as u128).sum();
    let mut vol_in: u128 = 0;
    let mut found = None;
    walk_cuts(g, cap, |v, entering, weight, side| {
        if cluster.contains(v) {
            let d = g.degree(v) as u128;
            if entering {
                vol_in += d;
            } else {
                vol_in -= d;
            }
        }
        if weight <= delta0 && vol_in > s0 && vol_total - vol_in > s0 {
            found = Some(VertexSet::from_iter_in(side.len(), (0..side.len()).filter(|&i| side[i])));
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(found)
}

/// Base strong partition: no cluster admits a cut of weight `≤ delta0`
/// whose two sides both carry volume `> s0` of the cluster.
pub fn base_strong_partition(g: &Graph, delta0: u64, s0: u128) -> Result<Partition> {
    base_strong_partition_capped(g, delta0, s0, DEFAULT_BRUTE_CAP)
}

pub fn base_strong_partition_capped(g: &Graph, delta0: u64, s0: u128, cap: usize) -> Result<Partition> {
    let n = g.vertex_count();
    if n > 0 && delta0 > g.min_degree() {
        return invalid(format!("δ₀ = {delta0} exceeds the minimum degree {}", g.min_degree()));
    }
    let mut work = vec![g.all_vertices()];
    let mut clusters = Vec::new();
    let mut certs = Vec::new();
    while let Some(c) = work.pop() {
        if c.is_empty() {
            continue;
        }
        let vol: u128 = c.iter().map(|v| g.degree(v) as u128).sum();
        if vol < 2 * (s0 + 1) {
            clusters.push(c);
            certs.push(BaseCertificate::VolumeBound);
            continue;
        }
        if n <= cap && n <= 63 {
            match violating_cut(g, &c, delta0, s0, cap)? {
                Some(side) => {
                    work.push(c.difference(&side));
                    work.push(c.intersection(&side));
                }
                None => {
                    clusters.push(c);
                    certs.push(BaseCertificate::Exhaustive);
                }
            }
            continue;
        }
        let split = stoer_wagner(g, &c).filter(|(_, side)| {
            let inside: u128 = side.iter().map(|v| g.degree(v) as u128).sum();
            g.boundary_weight(side) <= delta0 && inside > s0 && vol - inside > s0
        });
        match split {
            Some((_, side)) => {
                work.push(c.difference(&side));
                work.push(side);
            }
            None => {
                clusters.push(c);
                certs.push(BaseCertificate::Unverified);
            }
        }
    }
    Ok(Partition::new(g, clusters, certs))
}

/// Global minimum cut of `g[within]` (self-loops and boundary edges
/// ignored). Returns the cut weight inside and one side, or `None` when
/// `within` has fewer than two vertices.
pub fn stoer_wagner(g: &Graph, within: &VertexSet) -> Option<(u64, VertexSet)> {
    let verts = within.to_vec();
    let k = verts.len();
    if k < 2 {
        return None;
    }
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        index[v] = i;
    }
    let mut w = vec![vec![0u64; k]; k];
    for e in g.edges() {
        let (a, b) = (index[e.u], index[e.v]);
        if a != usize::MAX && b != usize::MAX && a != b {
            w[a][b] += e.w;
            w[b][a] += e.w;
        }
    }
    let mut groups: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    let mut active: Vec<usize> = (0..k).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    while active.len() > 1 {
        let mut added = vec![false; k];
        let mut key = vec![0u64; k];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&x| !added[x])
                .max_by_key(|&&x| (key[x], std::cmp::Reverse(x)))
                .unwrap();
            added[next] = true;
            if step == active.len() - 1 {
                if best.as_ref().is_none_or(|(bw, _)| key[next] < *bw) {
                    best = Some((key[next], groups[next].clone()));
                }
                prev = last;
                last = next;
                break;
            }
            for &x in &active {
                if !added[x] {
                    key[x] += w[next][x];
                }
            }
            prev = last;
            last = next;
        }
        // merge `last` into `prev`
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &x in &active {
            w[prev][x] += w[last][x];
            w[x][prev] = w[prev][x];
        }
        w[prev][prev] = 0;
        active.retain(|&x| x != last);
    }
    best.map(|(bw, side)| {
        (bw, VertexSet::from_iter_in(g.vertex_count(), side.into_iter().map(|i| verts[i])))
    })
}

/// Contracted multigraph maintained by the refinement. Edges keep separate
/// identities; `pair_weight` aggregates them per super-vertex pair.
#[derive(Debug, Clone)]
pub struct ContractionState {
    members: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    live_edges: Vec<usize>,
    degree: Vec<u64>,
    alive: Vec<bool>,
    ends: Vec<(usize, usize)>,
    weight: Vec<u64>,
    edge_alive: Vec<bool>,
    pair_weight: HashMap<(usize, usize), u64>,
    pairs: BTreeSet<(u64, usize, usize)>,
    degrees: BTreeSet<(u64, usize)>,
    pub update_count: u64,
    pub edge_count: usize,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl ContractionState {
    /// `H ← G[C]` over local ids `0..|C|`.
    fn new(h: &Graph) -> Self {
        let k = h.vertex_count();
        let mut st = ContractionState {
            members: (0..k).map(|v| vec![v]).collect(),
            incident: vec![Vec::new(); k],
            live_edges: vec![0; k],
            degree: vec![0; k],
            alive: vec![true; k],
            ends: Vec::new(),
            weight: Vec::new(),
            edge_alive: Vec::new(),
            pair_weight: HashMap::new(),
            pairs: BTreeSet::new(),
            degrees: BTreeSet::new(),
            update_count: 0,
            edge_count: h.edge_count(),
        };
        for (i, e) in h.edges().iter().enumerate() {
            st.ends.push((e.u, e.v));
            st.weight.push(e.w);
            st.edge_alive.push(true);
            st.incident[e.u].push(i);
            st.live_edges[e.u] += 1;
            st.degree[e.u] += e.w;
            if !e.is_loop() {
                st.incident[e.v].push(i);
                st.live_edges[e.v] += 1;
                st.degree[e.v] += e.w;
                *st.pair_weight.entry(key(e.u, e.v)).or_insert(0) += e.w;
            }
        }
        for (&(a, b), &w) in &st.pair_weight {
            st.pairs.insert((w, a, b));
        }
        for v in 0..k {
            st.degrees.insert((st.degree[v], v));
        }
        st
    }

    fn set_degree(&mut self, v: usize, d: u64) {
        self.degrees.remove(&(self.degree[v], v));
        self.degree[v] = d;
        if self.alive[v] {
            self.degrees.insert((d, v));
        }
    }

    fn add_pair(&mut self, a: usize, b: usize, delta: i128) {
        let k = key(a, b);
        let old = self.pair_weight.get(&k).copied().unwrap_or(0);
        let new = (old as i128 + delta) as u64;
        if old > 0 {
            self.pairs.remove(&(old, k.0, k.1));
        }
        if new > 0 {
            self.pair_weight.insert(k, new);
            self.pairs.insert((new, k.0, k.1));
        } else {
            self.pair_weight.remove(&k);
        }
    }

    fn kill_edge(&mut self, e: usize) {
        self.edge_alive[e] = false;
        self.update_count += 1;
        let (a, b) = self.ends[e];
        let w = self.weight[e];
        self.live_edges[a] -= 1;
        self.set_degree(a, self.degree[a] - w);
        if a != b {
            self.live_edges[b] -= 1;
            self.set_degree(b, self.degree[b] - w);
            self.add_pair(a, b, -(w as i128));
        }
    }

    fn remove_vertex(&mut self, v: usize) {
        for e in std::mem::take(&mut self.incident[v]) {
            if self.edge_alive[e] {
                self.kill_edge(e);
            }
        }
        self.degrees.remove(&(self.degree[v], v));
        self.alive[v] = false;
    }

    /// Contracts `a` and `b`; the endpoint with fewer live edges is relabelled.
    fn contract(&mut self, a: usize, b: usize) {
        let (u, v) = if self.live_edges[a] <= self.live_edges[b] { (a, b) } else { (b, a) };
        let between: Vec<usize> = self.incident[u]
            .iter()
            .copied()
            .filter(|&e| self.edge_alive[e] && {
                let (x, y) = self.ends[e];
                (x == u && y == v) || (x == v && y == u)
            })
            .collect();
        for e in between {
            self.kill_edge(e);
        }
        let moved: Vec<usize> =
            std::mem::take(&mut self.incident[u]).into_iter().filter(|&e| self.edge_alive[e]).collect();
        let du = self.degree[u];
        for &e in &moved {
            let (x, y) = self.ends[e];
            let w = self.weight[e];
            self.update_count += 1;
            if x == y {
                self.ends[e] = (v, v);
            } else {
                let other = if x == u { y } else { x };
                self.add_pair(u, other, -(w as i128));
                self.ends[e] = (v, other);
                self.add_pair(v, other, w as i128);
            }
        }
        self.set_degree(v, self.degree[v] + du);
        self.alive[u] = false;
        self.set_degree(u, 0);
        self.live_edges[v] += self.live_edges[u];
        self.live_edges[u] = 0;
        self.incident[v].extend(moved);
        let m = std::mem::take(&mut self.members[u]);
        self.members[v].extend(m);
    }
}

#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub partition: Partition,
    pub update_count: u64,
    /// Edge count of `G[C]`, boundary edges excluded.
    pub edge_count: usize,
}

/// Refines an `(s, αδ, 0)`-strong `cluster` of `g` into `(s, αδ, γ)`-strong
/// clusters: repeatedly contract the heaviest pair with weight `≥ γ·αδ`,
/// else remove a minimum-degree super-vertex of degree `≤ δ/100`.
pub fn gamma_refine(
    g: &Graph,
    cluster: &VertexSet,
    alpha_delta: u64,
    gamma: Dyadic,
    delta: u64,
) -> Result<RefineOutcome> {
    if cluster.is_empty() {
        return Ok(RefineOutcome {
            partition: Partition::new(g, vec![], vec![]),
            update_count: 0,
            edge_count: 0,
        });
    }
    let sub = g.induced_subgraph(cluster)?;
    // boundary self-loops would inflate degrees without adding inner weight
    let inner: Vec<Edge> = sub.graph.edges().iter().filter(|e| !e.is_loop()).copied().collect();
    let h = Graph::assemble(sub.graph.vertex_count(), inner, VertexSet::new(sub.graph.vertex_count()));
    let mut st = ContractionState::new(&h);
    // integer pair weights meet γ·αδ exactly when they reach its ceiling
    let threshold: Option<u128> = gamma.checked_mul_int(alpha_delta as u128).map(|t| t.ceil().max(1));
    let mut removed: Vec<usize> = Vec::new();
    loop {
        if let (Some(t), Some(&(w, a, b))) = (threshold, st.pairs.last()) {
            if w as u128 >= t {
                st.contract(a, b);
                continue;
            }
        }
        if let Some(&(d, v)) = st.degrees.first() {
            if (d as u128) * 100 <= delta as u128 {
                st.remove_vertex(v);
                removed.push(v);
                continue;
            }
        }
        break;
    }
    let universe = g.vertex_count();
    let lift = |locals: &[usize]| VertexSet::from_iter_in(universe, locals.iter().map(|&i| sub.vertices[i]));
    let mut clusters: Vec<VertexSet> = removed.iter().map(|&v| lift(&st.members[v])).collect();
    let rest: Vec<usize> = (0..st.alive.len())
        .filter(|&v| st.alive[v])
        .flat_map(|v| st.members[v].iter().copied())
        .collect();
    if !rest.is_empty() {
        clusters.push(lift(&rest));
    }
    let certs = vec![BaseCertificate::Exhaustive; clusters.len()];
    Ok(RefineOutcome {
        partition: Partition::new(g, clusters, certs),
        update_count: st.update_count,
        edge_count: st.edge_count,
    })
}

/// Parameters and outputs of one full strong partition.
#[derive(Debug, Clone)]
pub struct StrongPartitionOutcome {
    pub partition: Partition,
    pub s: u128,
    pub alpha_delta: u64,
    pub gamma: Dyadic,
    pub base: Partition,
    pub update_count: u64,
}

/// `s = ⌈c_s · α² · ⌈log₂ n⌉²⌉`, at least 1.
pub fn strength_s(alpha: Dyadic, n: usize, c_s: Dyadic) -> Result<u128> {
    let l = ceil_log2(n.max(2) as u128) as u128;
    alpha
        .checked_mul(&alpha)
        .and_then(|a2| a2.checked_mul_int(l * l))
        .and_then(|x| x.checked_mul(&c_s))
        .map(|x| x.ceil().max(1))
        .ok_or_else(|| Error::Overflow("strength parameter s".into()))
}

/// `γ = 1/(200αs)` rounded down to a power of two.
pub fn refine_gamma(alpha: Dyadic, s: u128) -> Result<Dyadic> {
    let x = alpha
        .checked_mul_int(200)
        .and_then(|a| a.checked_mul_int(s))
        .ok_or_else(|| Error::Overflow("200αs".into()))?;
    Ok(Dyadic::recip_floor(x.ceil().max(1)))
}

/// Strong partition of `h` into `(s, αδ, γ)`-strong clusters with `s`
/// derived from `n` and `c_s = 1`.
pub fn strong_partition(h: &Graph, delta: u64, alpha: Dyadic) -> Result<StrongPartitionOutcome> {
    let s = strength_s(alpha, h.vertex_count(), Dyadic::ONE)?;
    strong_partition_with(h, delta, alpha, s, DEFAULT_BRUTE_CAP)
}

pub fn strong_partition_with(
    h: &Graph,
    delta: u64,
    alpha: Dyadic,
    s: u128,
    cap: usize,
) -> Result<StrongPartitionOutcome> {
    let n = h.vertex_count();
    let ad = alpha
        .checked_mul_int(delta as u128)
        .ok_or_else(|| Error::Overflow("αδ".into()))?;
    if ad.exponent() != 0 || ad.numerator() == 0 || ad.numerator() > u64::MAX as u128 {
        return invalid(format!("αδ = {ad} must be a positive integer"));
    }
    let alpha_delta = ad.numerator() as u64;
    if (h.total_weight() as u128) > alpha_delta as u128 * n as u128 {
        return invalid("total edge weight exceeds αδn");
    }
    let gamma = refine_gamma(alpha, s)?;
    if n == 0 {
        let empty = Partition::new(h, vec![], vec![]);
        return Ok(StrongPartitionOutcome {
            partition: empty.clone(),
            s,
            alpha_delta,
            gamma,
            base: empty,
            update_count: 0,
        });
    }
    let g0 = augment_pendants(h, alpha_delta)?;
    let s0 = s
        .checked_mul(alpha_delta as u128)
        .ok_or_else(|| Error::Overflow("s·αδ".into()))?;
    let base0 = base_strong_partition_capped(&g0, alpha_delta, s0, cap)?;
    let mut base_clusters = Vec::new();
    let mut base_certs = Vec::new();
    for (c, cert) in base0.clusters.iter().zip(&base0.certificates) {
        let stripped = VertexSet::from_iter_in(n, c.iter().filter(|&v| v < n));
        if !stripped.is_empty() {
            base_clusters.push(stripped);
            base_certs.push(*cert);
        }
    }
    let base = Partition::new(h, base_clusters, base_certs);
    let mut clusters = Vec::new();
    let mut certs = Vec::new();
    let mut updates = 0;
    for (c, cert) in base.clusters.iter().zip(&base.certificates) {
        let r = gamma_refine(h, c, alpha_delta, gamma, delta)?;
        updates += r.update_count;
        certs.extend(std::iter::repeat_n(*cert, r.partition.clusters.len()));
        clusters.extend(r.partition.clusters);
    }
    Ok(StrongPartitionOutcome {
        partition: Partition::new(h, clusters, certs),
        s,
        alpha_delta,
        gamma,
        base,
        update_count: updates,
    })
}
