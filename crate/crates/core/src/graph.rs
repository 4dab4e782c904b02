//! Weighted undirected multigraphs with terminal flags, cuts, and the
//! degree-preserving induced-subgraph convention.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::vertex_set::VertexSet;

pub type VertexId = usize;

/// Default upper bound on a single edge weight.
pub const DEFAULT_MAX_WEIGHT: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: u64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    terminals: VertexSet,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from input edges. Self-loops are rejected here; they
    /// only arise from [`Graph::induced_subgraph`].
    pub fn new(
        n: usize,
        edges: Vec<Edge>,
        terminals: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self> {
        Self::with_weight_bound(n, edges, terminals, DEFAULT_MAX_WEIGHT)
    }

    pub fn with_weight_bound(
        n: usize,
        edges: Vec<Edge>,
        terminals: impl IntoIterator<Item = VertexId>,
        max_weight: u64,
    ) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return invalid(format!("edge {i} ({}, {}) has an endpoint out of range", e.u, e.v));
            }
            if e.is_loop() {
                return invalid(format!("edge {i} is a self-loop at {}", e.u));
            }
            if e.w == 0 || e.w > max_weight {
                return invalid(format!("edge {i} has weight {} outside 1..={max_weight}", e.w));
            }
        }
        let mut term = VertexSet::new(n);
        for t in terminals {
            if t >= n {
                return invalid(format!("terminal {t} out of range"));
            }
            term.insert(t);
        }
        Ok(Self::assemble(n, edges, term))
    }

    pub(crate) fn assemble(n: usize, edges: Vec<Edge>, terminals: VertexSet) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e.u].push(i);
            if !e.is_loop() {
                adj[e.v].push(i);
            }
        }
        Graph { n, edges, terminals, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn terminals(&self) -> &VertexSet {
        &self.terminals
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminals.contains(v)
    }

    /// Edge ids incident to `v`; a self-loop appears once.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.adj[v]
    }

    /// Weighted degree. Self-loops contribute their weight once, matching the
    /// boundary edge they stand in for.
    pub fn degree(&self, v: VertexId) -> u64 {
        self.adj[v].iter().map(|&i| self.edges[i].w).sum()
    }

    pub fn min_degree(&self) -> u64 {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Sum of all edge weights, self-loops included.
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Same graph, different terminal set.
    pub fn with_terminals(&self, terminals: &VertexSet) -> Graph {
        assert_eq!(terminals.universe(), self.n);
        Graph {
            n: self.n,
            edges: self.edges.clone(),
            terminals: terminals.clone(),
            adj: self.adj.clone(),
        }
    }

    /// `G[S]`: keeps edges inside `S`, turns every boundary edge into a
    /// self-loop at its inside endpoint so weighted degrees are preserved.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph> {
        if set.is_empty() {
            return invalid("induced subgraph of an empty vertex set");
        }
        let vertices = set.to_vec();
        let mut local = vec![None; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = Some(i);
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            match (local[e.u], local[e.v]) {
                (Some(a), Some(b)) => edges.push(Edge { u: a, v: b, w: e.w }),
                (Some(a), None) => edges.push(Edge { u: a, v: a, w: e.w }),
                (None, Some(b)) => edges.push(Edge { u: b, v: b, w: e.w }),
                (None, None) => {}
            }
        }
        let terminals = VertexSet::from_iter_in(
            vertices.len(),
            vertices.iter().enumerate().filter(|(_, &v)| self.is_terminal(v)).map(|(i, _)| i),
        );
        Ok(InducedSubgraph {
            graph: Graph::assemble(vertices.len(), edges, terminals),
            vertices,
            local,
        })
    }

    /// Weight of edges with exactly one endpoint in `side`, without checking
    /// that the side is proper.
    pub fn boundary_weight(&self, side: &VertexSet) -> u64 {
        self.edges
            .iter()
            .filter(|e| !e.is_loop() && side.contains(e.u) != side.contains(e.v))
            .map(|e| e.w)
            .sum()
    }

    /// `w(∂_{G[cluster]} side)`: crossing edges with both endpoints in `cluster`.
    pub fn inner_boundary_weight(&self, cluster: &VertexSet, side: &VertexSet) -> u64 {
        self.edges
            .iter()
            .filter(|e| {
                !e.is_loop()
                    && cluster.contains(e.u)
                    && cluster.contains(e.v)
                    && side.contains(e.u) != side.contains(e.v)
            })
            .map(|e| e.w)
            .sum()
    }

    pub fn cut_weight(&self, side: &VertexSet) -> Result<u64> {
        self.check_side(side)?;
        Ok(self.boundary_weight(side))
    }

    /// `w(∂U) / min(|U∩T|, |Ū∩T|)`, or `None` for a cut that is not Steiner.
    pub fn terminal_sparsity(&self, side: &VertexSet) -> Result<Option<Ratio<u64>>> {
        self.check_side(side)?;
        let inside = side.intersection_len(&self.terminals);
        let smaller = inside.min(self.terminals.len() - inside);
        if smaller == 0 {
            return Ok(None);
        }
        Ok(Some(Ratio::new(self.boundary_weight(side), smaller as u64)))
    }

    /// Both sides of the cut hold a terminal.
    pub fn is_steiner_side(&self, side: &VertexSet) -> bool {
        let inside = side.intersection_len(&self.terminals);
        inside > 0 && inside < self.terminals.len()
    }

    fn check_side(&self, side: &VertexSet) -> Result<()> {
        if side.universe() != self.n {
            return invalid(format!(
                "cut side over {} vertices for a graph with {}",
                side.universe(),
                self.n
            ));
        }
        if !side.is_proper() {
            return invalid("cut side must be a nonempty proper subset");
        }
        Ok(())
    }

    /// Connected components restricted to `within`, ignoring self-loops.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new(self.n);
        let mut out = Vec::new();
        for start in within.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::new(self.n);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(x) = stack.pop() {
                comp.insert(x);
                for &ei in &self.adj[x] {
                    let y = self.edges[ei].other(x);
                    if within.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

/// `G[S]` re-indexed to `0..|S|`, with the map back to parent ids.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// Local id → parent id.
    pub vertices: Vec<VertexId>,
    local: Vec<Option<usize>>,
}

impl InducedSubgraph {
    pub fn local_id(&self, parent: VertexId) -> Option<usize> {
        self.local.get(parent).copied().flatten()
    }

    pub fn lift(&self, local_set: &VertexSet, parent_universe: usize) -> VertexSet {
        VertexSet::from_iter_in(parent_universe, local_set.iter().map(|i| self.vertices[i]))
    }

    pub fn restrict(&self, parent_set: &VertexSet) -> VertexSet {
        VertexSet::from_iter_in(
            self.vertices.len(),
            parent_set.iter().filter_map(|v| self.local_id(v)),
        )
    }
}

/// One side of a bipartition plus its boundary weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub side: VertexSet,
    pub boundary_weight: u64,
}

impl Cut {
    pub fn new(g: &Graph, side: VertexSet) -> Self {
        let boundary_weight = g.boundary_weight(&side);
        Cut { side, boundary_weight }
    }

    pub fn complement(&self) -> Cut {
        Cut {
            side: self.side.complement(),
            boundary_weight: self.boundary_weight,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.side.is_proper()
    }
}
