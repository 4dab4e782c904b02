//! Seeded instance families. Every generator is deterministic in its seed.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Dumbbell,
    Clique,
    Grid,
    RandomGnm,
    PlantedCut,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Dumbbell, Family::Clique, Family::Grid, Family::RandomGnm, Family::PlantedCut];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Dumbbell => "dumbbell",
            Family::Clique => "clique",
            Family::Grid => "grid",
            Family::RandomGnm => "random_gnm",
            Family::PlantedCut => "planted_cut",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GenSpec {
    /// Two cliques of `size` vertices joined by one bridge; one terminal in
    /// each clique, far from the bridge.
    Dumbbell { size: usize, bridge_w: u64, inner_w: u64 },
    /// Complete graph, every vertex a terminal.
    Clique { n: usize, w: u64 },
    /// `rows × cols` grid with weights in `1..=max_w`.
    Grid { rows: usize, cols: usize, max_w: u64, terminals: usize },
    /// `m` uniformly random non-loop edges with weights in `1..=max_w`.
    RandomGnm { n: usize, m: usize, max_w: u64, terminals: usize },
    /// Two halves, each a cycle plus `chords` random chords of weight
    /// `inside_w`, joined by edges of total weight `cut_w`. Terminals are
    /// split between the halves.
    PlantedCut { n: usize, cut_w: u64, inside_w: u64, chords: usize, terminals: usize },
}

impl GenSpec {
    /// A representative instance of `family` on about `n` vertices.
    pub fn for_family(family: Family, n: usize) -> GenSpec {
        let n = n.max(2);
        match family {
            Family::Dumbbell => GenSpec::Dumbbell { size: (n / 2).max(1), bridge_w: 1, inner_w: 1 },
            Family::Clique => GenSpec::Clique { n, w: 1 },
            Family::Grid => {
                let rows = (n as f64).sqrt().floor().max(1.0) as usize;
                GenSpec::Grid { rows, cols: n.div_ceil(rows).max(2), max_w: 5, terminals: (n / 2).max(2) }
            }
            Family::RandomGnm => GenSpec::RandomGnm { n, m: 2 * n, max_w: 10, terminals: (n / 2).max(2) },
            Family::PlantedCut => {
                GenSpec::PlantedCut { n: n.max(4), cut_w: 3, inside_w: 10, chords: n, terminals: (n / 2).max(2) }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: Graph,
    /// Minimum Steiner cut value when the construction determines it.
    pub known_lambda: Option<u64>,
}

fn pick_terminals(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Result<Vec<usize>> {
    if t < 2 || t > n {
        return invalid(format!("terminal count {t} not in 2..={n}"));
    }
    let mut ts = sample(rng, n, t).into_vec();
    ts.sort_unstable();
    Ok(ts)
}

fn positive(w: u64, what: &str) -> Result<()> {
    if w == 0 {
        return invalid(format!("{what} must be positive"));
    }
    Ok(())
}

pub fn generate(spec: &GenSpec, seed: u64) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        GenSpec::Dumbbell { size, bridge_w, inner_w } => {
            if size == 0 {
                return invalid("dumbbell cliques need at least one vertex");
            }
            positive(bridge_w, "bridge weight")?;
            positive(inner_w, "inner weight")?;
            let mut edges = Vec::new();
            for base in [0, size] {
                for a in 0..size {
                    for b in a + 1..size {
                        edges.push(Edge { u: base + a, v: base + b, w: inner_w });
                    }
                }
            }
            edges.push(Edge { u: size - 1, v: size, w: bridge_w });
            let (a, b) = if size == 1 { (0, 1) } else { (0, 2 * size - 1) };
            let side = (size as u64 - 1) * inner_w;
            let lambda = if size == 1 { bridge_w } else { bridge_w.min(side) };
            Ok(Generated { graph: Graph::new(2 * size, edges, [a, b])?, known_lambda: Some(lambda) })
        }
        GenSpec::Clique { n, w } => {
            if n < 2 {
                return invalid("clique needs two vertices");
            }
            positive(w, "weight")?;
            let edges =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| Edge { u: a, v: b, w })).collect();
            Ok(Generated { graph: Graph::new(n, edges, 0..n)?, known_lambda: Some((n as u64 - 1) * w) })
        }
        GenSpec::Grid { rows, cols, max_w, terminals } => {
            positive(max_w, "max weight")?;
            let n = rows * cols;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push(Edge { u: v, v: v + 1, w: rng.gen_range(1..=max_w) });
                    }
                    if r + 1 < rows {
                        edges.push(Edge { u: v, v: v + cols, w: rng.gen_range(1..=max_w) });
                    }
                }
            }
            let ts = pick_terminals(&mut rng, n, terminals)?;
            Ok(Generated { graph: Graph::new(n, edges, ts)?, known_lambda: None })
        }
        GenSpec::RandomGnm { n, m, max_w, terminals } => {
            if n < 2 {
                return invalid("random graph needs two vertices");
            }
            positive(max_w, "max weight")?;
            let edges = (0..m)
                .map(|_| {
                    let u = rng.gen_range(0..n);
                    let v = (u + rng.gen_range(1..n)) % n;
                    Edge { u, v, w: rng.gen_range(1..=max_w) }
                })
                .collect();
            let ts = pick_terminals(&mut rng, n, terminals)?;
            Ok(Generated { graph: Graph::new(n, edges, ts)?, known_lambda: None })
        }
        GenSpec::PlantedCut { n, cut_w, inside_w, chords, terminals } => planted(&mut rng, n, cut_w, inside_w, chords, terminals),
    }
}

/// Any Steiner cut other than the planted one splits a half, which is a
/// cycle of weight-`inside_w` edges, so it costs at least `2·inside_w`.
fn planted(rng: &mut ChaCha8Rng, n: usize, cut_w: u64, inside_w: u64, chords: usize, terminals: usize) -> Result<Generated> {
    if n < 4 {
        return invalid("planted cut needs four vertices");
    }
    positive(inside_w, "inside weight")?;
    if terminals < 2 || terminals > n {
        return invalid(format!("terminal count {terminals} not in 2..={n}"));
    }
    // random relabelling so the planted side is not a prefix of the ids
    let mut perm: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
    let half = n / 2;
    let halves = [(0, half), (half, n)];
    let mut edges = Vec::new();
    for &(lo, hi) in &halves {
        let len = hi - lo;
        for i in 0..len {
            let (a, b) = (lo + i, lo + (i + 1) % len);
            if len == 2 && i == 1 {
                break;
            }
            let w = if len == 2 { 2 * inside_w } else { inside_w };
            edges.push(Edge { u: perm[a], v: perm[b], w });
        }
    }
    for _ in 0..chords {
        let (lo, hi) = halves[rng.gen_range(0..2)];
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        if a != b {
            edges.push(Edge { u: perm[a], v: perm[b], w: inside_w });
        }
    }
    let mut left = cut_w;
    while left > 0 {
        let w = if left <= 2 { left } else { rng.gen_range(1..=left) };
        let a = rng.gen_range(0..half);
        let b = rng.gen_range(half..n);
        edges.push(Edge { u: perm[a], v: perm[b], w });
        left -= w;
    }
    let in_left = (terminals / 2).clamp(1, half);
    let in_right = (terminals - in_left).min(n - half);
    let mut ts: Vec<usize> = sample(rng, half, in_left).into_iter().map(|i| perm[i]).collect();
    ts.extend(sample(rng, n - half, in_right).into_iter().map(|i| perm[half + i]));
    ts.sort_unstable();
    Ok(Generated { graph: Graph::new(n, edges, ts)?, known_lambda: Some(cut_w.min(2 * inside_w)) })
}
