//! Extended DIMACS: `p steiner <n> <m>`, then `e <u> <v> <w>` and `t <v>`
//! lines with 1-indexed vertices. Lines starting with `c` are comments.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, DEFAULT_MAX_WEIGHT};
use crate::vertex_set::VertexSet;

fn err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    match tok {
        None => err(line, format!("missing {what}")),
        Some(t) => t.parse().or_else(|_| err(line, format!("bad {what} `{t}`"))),
    }
}

fn vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize> {
    let v: i64 = field(tok, line, "vertex id")?;
    if v < 1 || v as u64 > n as u64 {
        return err(line, format!("vertex {v} outside 1..={n}"));
    }
    Ok(v as usize - 1)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut terminals: Option<VertexSet> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return err(line, "duplicate problem line");
                }
                if toks.next() != Some("steiner") {
                    return err(line, "expected `p steiner <n> <m>`");
                }
                let n: usize = field(toks.next(), line, "vertex count")?;
                let m: usize = field(toks.next(), line, "edge count")?;
                header = Some((n, m));
                terminals = Some(VertexSet::new(n));
            }
            "e" | "t" => {
                let Some((n, _)) = header else {
                    return err(line, "data line before the problem line");
                };
                if kind == "e" {
                    let u = vertex(toks.next(), line, n)?;
                    let v = vertex(toks.next(), line, n)?;
                    let w: i128 = field(toks.next(), line, "weight")?;
                    if u == v {
                        return err(line, format!("self-loop at vertex {}", u + 1));
                    }
                    if w <= 0 || w > DEFAULT_MAX_WEIGHT as i128 {
                        return err(line, format!("weight {w} outside 1..={DEFAULT_MAX_WEIGHT}"));
                    }
                    edges.push(Edge { u, v, w: w as u64 });
                } else {
                    let t = vertex(toks.next(), line, n)?;
                    let set = terminals.as_mut().unwrap();
                    if set.contains(t) {
                        return err(line, format!("terminal {} declared twice", t + 1));
                    }
                    set.insert(t);
                }
            }
            other => return err(line, format!("unknown line type `{other}`")),
        }
        if toks.next().is_some() {
            return err(line, "trailing tokens");
        }
    }
    let Some((n, m)) = header else {
        return err(last_line.max(1), "missing problem line");
    };
    if edges.len() != m {
        return err(last_line, format!("header declares {m} edges, found {}", edges.len()));
    }
    Graph::new(n, edges, terminals.unwrap().iter()).or_else(|e| err(last_line, e.to_string()))
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p steiner {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w).unwrap();
    }
    for t in g.terminals().iter() {
        writeln!(out, "t {}", t + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_parses() {
        let g = parse_graph("p steiner 3 3\ne 1 2 1\ne 2 3 1\ne 1 3 1\nt 1\nt 2\nt 3").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.terminal_count(), 3);
        assert_eq!(parse_graph(&emit_graph(&g)).unwrap(), g);
    }

    fn line_of(text: &str) -> usize {
        match parse_graph(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(line_of("p steiner 2 1\ne 1 1 5"), 2);
        assert_eq!(line_of("p steiner 2 1\ne 1 2 0"), 2);
        assert_eq!(line_of("p steiner 2 1\ne 1 2 -3"), 2);
        assert_eq!(line_of("p steiner 2 1\ne 1 3 1"), 2);
        assert_eq!(line_of("p steiner 2 1\nc note\ne 1 2 1\nt 1\nt 1"), 5);
        assert_eq!(line_of("e 1 2 1"), 1);
        assert_eq!(line_of("p steiner 2 2\ne 1 2 1"), 2);
        assert_eq!(line_of("p steiner 2 1\nx"), 2);
    }
}
