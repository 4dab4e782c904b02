//! Exact s–t maximum flow (Dinic) on integer capacities, canonical minimum
//! cut extraction, and flow path decomposition.
//!
//! Undirected edges are a pair of opposite arcs sharing one capacity; the
//! flow on an edge is its signed net value. Arc order is insertion order, so
//! results are reproducible.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::vertex_set::VertexSet;

static GLOBAL_FLOW_CALLS: AtomicU64 = AtomicU64::new(0);

/// Process-wide number of max-flow calls so far.
pub fn global_flow_calls() -> u64 {
    GLOBAL_FLOW_CALLS.load(Ordering::Relaxed)
}

#[derive(Debug, Clone)]
struct NetEdge {
    u: usize,
    v: usize,
    cap: i128,
    directed: bool,
}

/// A capacitated network. Arcs `2e` and `2e + 1` are the two directions of
/// edge `e`.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    n: usize,
    edges: Vec<NetEdge>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Network of a graph; self-loops carry no flow and are skipped.
    pub fn from_graph(g: &Graph) -> Self {
        let mut net = FlowNetwork::new(g.vertex_count());
        for e in g.edges() {
            if !e.is_loop() {
                net.add_undirected(e.u, e.v, e.w as i128);
            }
        }
        net
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (self.edges[e].u, self.edges[e].v)
    }

    pub fn capacity(&self, e: usize) -> i128 {
        self.edges[e].cap
    }

    pub fn add_undirected(&mut self, u: usize, v: usize, cap: i128) -> usize {
        self.push(u, v, cap, false)
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: i128) -> usize {
        self.push(u, v, cap, true)
    }

    fn push(&mut self, u: usize, v: usize, cap: i128, directed: bool) -> usize {
        assert!(u < self.n && v < self.n && u != v, "bad network edge ({u}, {v})");
        assert!(cap > 0, "capacities must be positive");
        let id = self.edges.len();
        self.edges.push(NetEdge { u, v, cap, directed });
        self.adj[u].push(2 * id);
        self.adj[v].push(2 * id + 1);
        id
    }

    /// Capacity of arcs leaving `side`.
    pub fn cut_capacity(&self, side: &VertexSet) -> i128 {
        self.edges
            .iter()
            .map(|e| match (side.contains(e.u), side.contains(e.v)) {
                (true, false) => e.cap,
                (false, true) if !e.directed => e.cap,
                _ => 0,
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: i128,
    /// Net flow per network edge, positive along `u → v`.
    pub edge_flows: Vec<i128>,
    /// Vertices reachable from the source in the residual network: the
    /// inclusion-minimal source side of a minimum cut.
    pub source_side: VertexSet,
    /// Vertices that cannot reach the sink in the residual network: the
    /// inclusion-maximal source side of a minimum cut.
    pub max_source_side: VertexSet,
    pub call_id: u64,
}

struct Dinic<'a> {
    net: &'a FlowNetwork,
    // residual capacity per arc
    res: Vec<i128>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl<'a> Dinic<'a> {
    fn new(net: &'a FlowNetwork) -> Self {
        let mut res = Vec::with_capacity(net.edges.len() * 2);
        for e in &net.edges {
            res.push(e.cap);
            res.push(if e.directed { 0 } else { e.cap });
        }
        Dinic { net, res, level: vec![-1; net.n], iter: vec![0; net.n] }
    }

    fn head(&self, arc: usize) -> usize {
        let e = &self.net.edges[arc / 2];
        if arc.is_multiple_of(2) {
            e.v
        } else {
            e.u
        }
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &a in &self.net.adj[x] {
                let y = self.head(a);
                if self.res[a] > 0 && self.level[y] < 0 {
                    self.level[y] = self.level[x] + 1;
                    q.push_back(y);
                }
            }
        }
    }

    fn dfs(&mut self, x: usize, t: usize, limit: i128) -> i128 {
        if x == t {
            return limit;
        }
        while self.iter[x] < self.net.adj[x].len() {
            let a = self.net.adj[x][self.iter[x]];
            let y = self.head(a);
            if self.res[a] > 0 && self.level[y] == self.level[x] + 1 {
                let pushed = self.dfs(y, t, limit.min(self.res[a]));
                if pushed > 0 {
                    self.res[a] -= pushed;
                    self.res[a ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[x] += 1;
        }
        0
    }

    /// Vertices with a residual path to `t`.
    fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.net.n];
        seen[t] = true;
        let mut q = VecDeque::from([t]);
        while let Some(y) = q.pop_front() {
            for &a in &self.net.adj[y] {
                // `a ^ 1` runs from head(a) into y
                let x = self.head(a);
                if !seen[x] && self.res[a ^ 1] > 0 {
                    seen[x] = true;
                    q.push_back(x);
                }
            }
        }
        seen
    }

    fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0i128;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i128::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// Maximum flow from `source` to `sink`. Counts toward the global tally.
pub fn max_flow(net: &FlowNetwork, source: usize, sink: usize) -> Result<FlowResult> {
    if source == sink {
        return invalid("source and sink coincide");
    }
    if source >= net.n || sink >= net.n {
        return invalid("source or sink out of range");
    }
    let call_id = GLOBAL_FLOW_CALLS.fetch_add(1, Ordering::Relaxed) + 1;
    let mut d = Dinic::new(net);
    let value = d.run(source, sink);
    d.bfs(source);
    let source_side =
        VertexSet::from_iter_in(net.n, (0..net.n).filter(|&v| d.level[v] >= 0));
    let reaches_sink = d.reaching(sink);
    let max_source_side =
        VertexSet::from_iter_in(net.n, (0..net.n).filter(|&v| !reaches_sink[v]));
    let edge_flows = net
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| e.cap - d.res[2 * i])
        .collect();
    debug_assert_eq!(net.cut_capacity(&source_side), value, "max-flow/min-cut duality");
    debug_assert_eq!(net.cut_capacity(&max_source_side), value, "max-flow/min-cut duality");
    Ok(FlowResult { value, edge_flows, source_side, max_source_side, call_id })
}

/// Max flow between two vertices of a graph.
pub fn max_flow_graph(g: &Graph, source: VertexId, sink: VertexId) -> Result<FlowResult> {
    max_flow(&FlowNetwork::from_graph(g), source, sink)
}

/// Per-run flow accounting layered over the global counter.
#[derive(Debug, Default)]
pub struct FlowMeter {
    individual: AtomicU64,
}

impl FlowMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn max_flow(&self, net: &FlowNetwork, source: usize, sink: usize) -> Result<FlowResult> {
        let r = max_flow(net, source, sink)?;
        self.individual.fetch_add(1, Ordering::Relaxed);
        Ok(r)
    }

    pub fn calls(&self) -> u64 {
        self.individual.load(Ordering::Relaxed)
    }
}

/// One path of a flow decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    /// Vertex sequence from source to sink.
    pub vertices: Vec<usize>,
    /// Network edges used, in order.
    pub edges: Vec<usize>,
    pub capacity: i128,
}

impl FlowPath {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }
}

// Flow support as directed arcs: (edge id, forward?) with amount.
struct Support {
    out: Vec<Vec<(usize, bool)>>,
    amount: Vec<i128>,
}

impl Support {
    fn new(net: &FlowNetwork, flows: &[i128]) -> Self {
        let mut out = vec![Vec::new(); net.n];
        let mut amount = vec![0i128; flows.len()];
        for (i, &f) in flows.iter().enumerate() {
            let e = &net.edges[i];
            if f > 0 {
                out[e.u].push((i, true));
            } else if f < 0 {
                out[e.v].push((i, false));
            }
            amount[i] = f.abs();
        }
        Support { out, amount }
    }

    fn head(net: &FlowNetwork, (e, fwd): (usize, bool)) -> usize {
        if fwd {
            net.edges[e].v
        } else {
            net.edges[e].u
        }
    }

    fn next_arc(&self, x: usize) -> Option<(usize, bool)> {
        self.out[x].iter().copied().find(|&(e, _)| self.amount[e] > 0)
    }

    /// Finds one directed cycle in the support, as a list of arcs.
    fn find_cycle(&self, net: &FlowNetwork) -> Option<Vec<(usize, bool)>> {
        let n = net.n;
        let mut state = vec![0u8; n];
        let mut ptr = vec![0usize; n];
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, Option<(usize, bool)>)> = vec![(root, None)];
            state[root] = 1;
            while let Some(&(x, _)) = stack.last() {
                let arcs = &self.out[x];
                let mut advanced = false;
                while ptr[x] < arcs.len() {
                    let arc = arcs[ptr[x]];
                    ptr[x] += 1;
                    if self.amount[arc.0] == 0 {
                        continue;
                    }
                    let y = Support::head(net, arc);
                    if state[y] == 1 {
                        let pos = stack.iter().position(|&(v, _)| v == y).unwrap();
                        let mut cycle: Vec<_> =
                            stack[pos + 1..].iter().map(|&(_, a)| a.unwrap()).collect();
                        cycle.push(arc);
                        return Some(cycle);
                    }
                    if state[y] == 0 {
                        state[y] = 1;
                        stack.push((y, Some(arc)));
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    state[x] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Decomposes a flow into source–sink paths after cancelling all flow
/// cycles. Each peel zeroes at least one arc, so at most `m` paths result.
pub fn decompose_paths(
    net: &FlowNetwork,
    fr: &FlowResult,
    source: usize,
    sink: usize,
) -> Result<Vec<FlowPath>> {
    let mut sup = Support::new(net, &fr.edge_flows);
    while let Some(cycle) = sup.find_cycle(net) {
        let m = cycle.iter().map(|&(e, _)| sup.amount[e]).min().unwrap();
        for &(e, _) in &cycle {
            sup.amount[e] -= m;
        }
    }
    let mut paths = Vec::new();
    let mut peeled = 0i128;
    while let Some(first) = sup.next_arc(source) {
        let mut vertices = vec![source];
        let mut arcs = vec![first];
        let mut x = Support::head(net, first);
        vertices.push(x);
        while x != sink {
            let Some(arc) = sup.next_arc(x) else {
                return Err(Error::Internal(format!("flow not conserved at vertex {x}")));
            };
            arcs.push(arc);
            x = Support::head(net, arc);
            vertices.push(x);
            if vertices.len() > net.n + 1 {
                return Err(Error::Internal("flow support still cyclic after cancellation".into()));
            }
        }
        let cap = arcs.iter().map(|&(e, _)| sup.amount[e]).min().unwrap();
        for &(e, _) in &arcs {
            sup.amount[e] -= cap;
        }
        peeled += cap;
        paths.push(FlowPath { vertices, edges: arcs.iter().map(|&(e, _)| e).collect(), capacity: cap });
    }
    if peeled != fr.value {
        return Err(Error::Internal(format!(
            "peeled {peeled} of a flow of value {}",
            fr.value
        )));
    }
    Ok(paths)
}
