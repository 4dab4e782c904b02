//! Exhaustive cut enumeration: strength certifiers and the all-cuts oracle.
//!
//! Cuts are walked in Gray-code order with the last vertex pinned outside the
//! side, so each proper bipartition is visited once and every step flips one
//! vertex. All tracked quantities are updated incrementally per flip.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};
use crate::params::StrengthParams;
use crate::vertex_set::VertexSet;

pub const DEFAULT_BRUTE_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub holds: bool,
    /// A violating cut side when `holds` is false.
    pub witness: Option<VertexSet>,
}

impl Certificate {
    fn ok() -> Self {
        Certificate { holds: true, witness: None }
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.vertex_count() > cap || g.vertex_count() > 63 {
        return Err(Error::CapacityExceeded { vertices: g.vertex_count(), cap });
    }
    Ok(())
}

/// Visits every proper bipartition. The callback receives the flipped vertex,
/// whether it just entered the side, the current boundary weight, and the
/// side membership array.
pub fn walk_cuts(
    g: &Graph,
    cap: usize,
    mut visit: impl FnMut(usize, bool, u64, &[bool]) -> ControlFlow<()>,
) -> Result<()> {
    check_cap(g, cap)?;
    let n = g.vertex_count();
    if n < 2 {
        return Ok(());
    }
    let mut side = vec![false; n];
    let mut weight: u64 = 0;
    let total: u64 = 1 << (n - 1);
    for i in 1..total {
        let v = i.trailing_zeros() as usize;
        let entering = !side[v];
        for &ei in g.incident(v) {
            let e = g.edges()[ei];
            if e.is_loop() {
                continue;
            }
            let u = e.other(v);
            if side[u] == side[v] {
                weight += e.w;
            } else {
                weight -= e.w;
            }
        }
        side[v] = entering;
        if visit(v, entering, weight, &side).is_break() {
            break;
        }
    }
    Ok(())
}

fn side_set(side: &[bool]) -> VertexSet {
    VertexSet::from_iter_in(side.len(), side.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
}

struct ClusterTrack {
    member: Vec<bool>,
    size: usize,
    inside: usize,
    inner: u64,
    params: StrengthParams,
    witness: Option<VertexSet>,
}

/// Checks several clusters in one enumeration pass. With `terminal_mode`
/// only Steiner cuts are examined and intersections count terminals.
pub fn certify_clusters(
    g: &Graph,
    clusters: &[(VertexSet, StrengthParams)],
    terminal_mode: bool,
    cap: usize,
) -> Result<Vec<Certificate>> {
    let n = g.vertex_count();
    let terminals = g.terminals();
    let counted = |v: usize| !terminal_mode || terminals.contains(v);
    let mut tracks: Vec<ClusterTrack> = clusters
        .iter()
        .map(|(c, p)| {
            let member: Vec<bool> = (0..n).map(|v| c.contains(v)).collect();
            let size = (0..n).filter(|&v| member[v] && counted(v)).count();
            ClusterTrack { member, size, inside: 0, inner: 0, params: *p, witness: None }
        })
        .collect();
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, t) in tracks.iter().enumerate() {
        for (v, _) in t.member.iter().enumerate().filter(|(_, &m)| m) {
            by_vertex[v].push(i);
        }
    }
    let total_terms = terminals.len();
    let mut terms_in_side = 0usize;
    let mut open = tracks.iter().filter(|t| t.size >= 2).count();
    walk_cuts(g, cap, |v, entering, weight, side| {
        if terminals.contains(v) {
            if entering {
                terms_in_side += 1;
            } else {
                terms_in_side -= 1;
            }
        }
        for &ci in &by_vertex[v] {
            let t = &mut tracks[ci];
            if counted(v) {
                if entering {
                    t.inside += 1;
                } else {
                    t.inside -= 1;
                }
            }
            for &ei in g.incident(v) {
                let e = g.edges()[ei];
                if e.is_loop() {
                    continue;
                }
                let u = e.other(v);
                if !t.member[u] {
                    continue;
                }
                // `side[v]` is already flipped.
                if side[u] != side[v] {
                    t.inner += e.w;
                } else {
                    t.inner -= e.w;
                }
            }
        }
        if terminal_mode && (terms_in_side == 0 || terms_in_side == total_terms) {
            return ControlFlow::Continue(());
        }
        for t in tracks.iter_mut() {
            if t.witness.is_some() || t.size < 2 || weight > t.params.delta {
                continue;
            }
            let smaller = t.inside.min(t.size - t.inside) as u128;
            let violated =
                smaller > t.params.s || (smaller > 0 && !t.params.inner_weight_ok(t.inner));
            if violated {
                t.witness = Some(side_set(side));
                open -= 1;
            }
        }
        if open == 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(tracks
        .into_iter()
        .map(|t| match t.witness {
            Some(w) => Certificate { holds: false, witness: Some(w) },
            None => Certificate::ok(),
        })
        .collect())
}

/// `(s, δ, γ)`-strength of `cluster` in `g` by exhaustive enumeration.
pub fn certify_strong_bruteforce(
    g: &Graph,
    cluster: &VertexSet,
    p: &StrengthParams,
    cap: usize,
) -> Result<Certificate> {
    Ok(certify_clusters(g, &[(cluster.clone(), *p)], false, cap)?.remove(0))
}

/// `(s, δ, γ, T)`-terminal-strength of `cluster` in `g`, with `T` the
/// graph's terminal set.
pub fn certify_terminal_strong_bruteforce(
    g: &Graph,
    cluster: &VertexSet,
    p: &StrengthParams,
    cap: usize,
) -> Result<Certificate> {
    Ok(certify_clusters(g, &[(cluster.clone(), *p)], true, cap)?.remove(0))
}

/// Minimum Steiner cut by enumerating every bipartition. `None` when fewer
/// than two terminals exist.
pub fn brute_force_min_steiner_cut(g: &Graph, cap: usize) -> Result<Option<Cut>> {
    let (value, cuts) = all_min_steiner_cuts(g, cap)?;
    Ok(cuts.into_iter().next().map(|side| Cut { side, boundary_weight: value }))
}

/// The minimum Steiner cut value and every side (with the last vertex
/// outside) achieving it.
pub fn all_min_steiner_cuts(g: &Graph, cap: usize) -> Result<(u64, Vec<VertexSet>)> {
    let terminals = g.terminals().clone();
    let total = terminals.len();
    let mut best = u64::MAX;
    let mut sides = Vec::new();
    let mut inside = 0usize;
    walk_cuts(g, cap, |v, entering, weight, side| {
        if terminals.contains(v) {
            if entering {
                inside += 1;
            } else {
                inside -= 1;
            }
        }
        if inside == 0 || inside == total || weight > best {
            return ControlFlow::Continue(());
        }
        if weight < best {
            best = weight;
            sides.clear();
        }
        sides.push(side_set(side));
        ControlFlow::Continue(())
    })?;
    Ok((best, sides))
}
