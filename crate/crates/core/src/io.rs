//! Plain-text edge-list format.
//!
//! ```text
//! c comment
//! p fas <num_vertices> <num_arcs>
//! a <tail> <head> <weight>
//! ```
//!
//! Vertices are 1-indexed. Arcs are numbered by the order of their `a` lines,
//! starting at 1 in text and at 0 internally. The vertex-weighted variant uses
//! the header `p fvs <n> <m>`, lines `v <id> <weight>` and unweighted arc lines
//! `a <tail> <head>`; vertices without a `v` line get weight 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{ArcId, VertexId, VertexWeightedDigraph, Weight, WeightedMultiDigraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Fas(WeightedMultiDigraph),
    Fvs(VertexWeightedDigraph),
}

/// A loop removed by `--strip-loops`. Loops lie in every feedback set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrippedLoop {
    pub line: usize,
    pub arc: ArcId,
    pub vertex: VertexId,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub instance: Instance,
    pub loops: Vec<StrippedLoop>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    pub strip_loops: bool,
}

/// Arc id as shown in text output.
pub fn display_id(id: ArcId) -> usize {
    id + 1
}

/// Parses a 1-based arc id from text.
pub fn parse_id(text: &str) -> Option<ArcId> {
    text.trim().parse::<usize>().ok().filter(|&k| k > 0).map(|k| k - 1)
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

fn weight(tok: Option<&str>, line: usize) -> Result<Weight> {
    let tok = tok.ok_or_else(|| err(line, "missing weight"))?;
    match tok.parse::<i128>() {
        Ok(w) if w > 0 && w <= Weight::MAX as i128 => Ok(w as Weight),
        Ok(_) => Err(err(line, format!("weight must be a positive integer, got `{tok}`"))),
        Err(_) => Err(err(line, format!("invalid weight `{tok}` (integers only)"))),
    }
}

pub fn parse_instance(text: &str, opts: ParseOptions) -> Result<Parsed> {
    let mut header: Option<(bool, usize, usize)> = None;
    let mut arcs: Vec<(usize, VertexId, VertexId, Weight)> = Vec::new();
    let mut vweights: BTreeMap<VertexId, Weight> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err(line, "duplicate header"));
                }
                let fvs = match toks.next() {
                    Some("fas") => false,
                    Some("fvs") => true,
                    other => return Err(err(line, format!("unknown problem `{}`", other.unwrap_or("")))),
                };
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "arc count")?;
                header = Some((fvs, n, m));
            }
            "a" | "v" => {
                let (fvs, n, _) = header.ok_or_else(|| err(line, "line before header"))?;
                let vertex = |tok: Option<&str>| -> Result<VertexId> {
                    let v: VertexId = number(tok, line, "vertex")?;
                    if v == 0 || v > n {
                        return Err(err(line, format!("vertex {v} outside 1..={n}")));
                    }
                    Ok(v)
                };
                if kind == "v" {
                    if !fvs {
                        return Err(err(line, "vertex weights need a `p fvs` header"));
                    }
                    let v = vertex(toks.next())?;
                    let w = weight(toks.next(), line)?;
                    if vweights.insert(v, w).is_some() {
                        return Err(err(line, format!("vertex {v} weighted twice")));
                    }
                } else {
                    let tail = vertex(toks.next())?;
                    let head = vertex(toks.next())?;
                    let w = if fvs { 1 } else { weight(toks.next(), line)? };
                    arcs.push((line, tail, head, w));
                }
            }
            other => return Err(err(line, format!("unknown line type `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(err(line, format!("unexpected token `{extra}`")));
        }
    }

    let (fvs, n, m) = header.ok_or_else(|| err(1, "missing `p` header"))?;
    if arcs.len() != m {
        return Err(err(
            text.lines().count().max(1),
            format!("header declares {m} arcs, found {}", arcs.len()),
        ));
    }

    let mut g = WeightedMultiDigraph::new();
    for v in 1..=n {
        g.add_vertex(v);
    }
    let mut loops = Vec::new();
    for (id, &(line, tail, head, w)) in arcs.iter().enumerate() {
        if tail == head {
            if !opts.strip_loops {
                return Err(err(
                    line,
                    format!("loop at vertex {tail}; loops lie in every feedback set (use --strip-loops)"),
                ));
            }
            loops.push(StrippedLoop {
                line,
                arc: id,
                vertex: tail,
                weight: w,
            });
            continue;
        }
        g.insert_arc(id, tail, head, w).map_err(|e| err(line, e.to_string()))?;
    }

    let instance = if fvs {
        let vertex_weight = (1..=n).map(|v| (v, vweights.get(&v).copied().unwrap_or(1))).collect();
        Instance::Fvs(VertexWeightedDigraph {
            graph: g,
            vertex_weight,
        })
    } else {
        Instance::Fas(g)
    };
    Ok(Parsed { instance, loops })
}

/// Parses a `p fas` instance, rejecting vertex-weighted input.
pub fn parse_fas(text: &str) -> Result<WeightedMultiDigraph> {
    match parse_instance(text, ParseOptions::default())?.instance {
        Instance::Fas(g) => Ok(g),
        Instance::Fvs(_) => Err(err(1, "expected a `p fas` instance")),
    }
}

/// Vertex ids are written 1-based: if the graph uses vertex 0 every id is
/// shifted by one.
fn vertex_shift(vertices: impl Iterator<Item = VertexId>) -> (usize, usize) {
    let vs: Vec<VertexId> = vertices.collect();
    let shift = usize::from(vs.contains(&0));
    let n = vs.iter().map(|v| v + shift).max().unwrap_or(0);
    (shift, n)
}

/// Writes `g` with arcs in id order; the k-th `a` line is the arc with the
/// k-th smallest id.
pub fn write_fas(g: &WeightedMultiDigraph) -> String {
    let (shift, n) = vertex_shift(g.vertices());
    let mut s = String::new();
    writeln!(s, "p fas {} {}", n, g.num_arcs()).unwrap();
    for (a, w) in g.weighted_arcs() {
        writeln!(s, "a {} {} {}", a.tail + shift, a.head + shift, w).unwrap();
    }
    s
}

pub fn write_fvs(g: &VertexWeightedDigraph) -> String {
    let (shift, n) = vertex_shift(g.vertex_weight.keys().copied().chain(g.graph.vertices()));
    let mut s = String::new();
    writeln!(s, "p fvs {} {}", n, g.graph.num_arcs()).unwrap();
    for (&v, &w) in &g.vertex_weight {
        writeln!(s, "v {} {}", v + shift, w).unwrap();
    }
    for a in g.graph.arcs() {
        writeln!(s, "a {} {}", a.tail + shift, a.head + shift).unwrap();
    }
    s
}

/// Graphviz rendering; arcs are labelled `id:weight` (1-based ids) and the
/// arcs in `highlight` are drawn bold red.
pub fn write_dot(g: &WeightedMultiDigraph, highlight: &BTreeSet<ArcId>) -> String {
    let mut s = String::from("digraph G {\n");
    for v in g.vertices() {
        writeln!(s, "  v{v};").unwrap();
    }
    for (a, w) in g.weighted_arcs() {
        let style = if highlight.contains(&a.id) {
            ", color=red, penwidth=2"
        } else {
            ""
        };
        writeln!(
            s,
            "  v{} -> v{} [label=\"{}:{}\"{}];",
            a.tail,
            a.head,
            display_id(a.id),
            w,
            style
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle_with_comments() {
        let text = "c a triangle\np fas 3 3\na 1 2 1\nc mid\na 2 3 2\na 3 1 3\n";
        let g = parse_fas(text).unwrap();
        assert_eq!(g.num_arcs(), 3);
        assert_eq!(g.weight(2).unwrap(), 3);
        assert_eq!(g.arc(0).unwrap().tail, 1);
        assert!(!crate::graph::is_acyclic(&g));
    }

    #[test]
    fn parallel_lines_make_parallel_arcs() {
        let g = parse_fas("p fas 2 3\na 1 2 1\na 1 2 4\na 2 1 1\n").unwrap();
        assert_eq!(g.parallel_class(0).unwrap(), vec![0, 1]);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_fas("p fas 2 1\n\na 1 2 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_fas("p fas 2 1\na 1 2 -4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_fas("p fas 2 1\na 1 2 1.5\n").unwrap_err();
        assert!(e.to_string().contains("integers only"));
        let e = parse_fas("p fas 2 1\na 1 3 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_fas("a 1 2 1\n").is_err());
        assert!(parse_fas("p fas 2 2\na 1 2 1\n").is_err());
    }

    #[test]
    fn loops_rejected_or_stripped() {
        let text = "p fas 2 3\na 1 1 5\na 1 2 1\na 2 1 1\n";
        let e = parse_instance(text, ParseOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let p = parse_instance(text, ParseOptions { strip_loops: true }).unwrap();
        assert_eq!(p.loops.len(), 1);
        assert_eq!(p.loops[0].weight, 5);
        let Instance::Fas(g) = p.instance else { panic!() };
        assert_eq!(g.arc_ids().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn fvs_instances() {
        let text = "p fvs 3 3\nv 1 4\nv 3 2\na 1 2\na 2 3\na 3 1\n";
        let Instance::Fvs(g) = parse_instance(text, ParseOptions::default()).unwrap().instance else {
            panic!("expected fvs")
        };
        assert_eq!(g.weight(1).unwrap(), 4);
        assert_eq!(g.weight(2).unwrap(), 1);
        assert_eq!(g.graph.num_arcs(), 3);
        let again = parse_instance(&write_fvs(&g), ParseOptions::default()).unwrap();
        assert_eq!(again.instance, Instance::Fvs(g));
    }

    #[test]
    fn round_trip() {
        let text = "p fas 4 4\na 1 2 3\na 2 3 1\na 3 1 2\na 3 4 9\n";
        let g = parse_fas(text).unwrap();
        assert_eq!(write_fas(&g), text);
        let dot = write_dot(&g, &BTreeSet::from([1]));
        assert!(dot.contains("v2 -> v3 [label=\"2:1\", color=red"));
    }
}
