//! Graph file reading and writing.
//!
//! The format is the DIMACS-style edge list used by PACE tooling: a problem
//! line `p edge <n> <m>` followed by `m` lines `e <u> <v>` with 1-indexed
//! endpoints. Repeating a pair raises the edge multiplicity; `e u u` writes
//! a loop. Lines starting with `c` are comments. UTF-8, LF line ends.

use std::collections::BTreeMap;

use nearforest::{MultiGraph, VertexId};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex index {index} out of range 1..={n}")]
    IndexOutOfRange { line: usize, index: u64, n: usize },
    #[error("line {line}: declared {declared} edges but the file lists {found}")]
    EdgeCountMismatch {
        line: usize,
        declared: usize,
        found: usize,
    },
    #[error("missing problem line")]
    MissingHeader,
}

pub fn parse_graph(text: &str) -> Result<MultiGraph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None; // n, m, line
    let mut graph = MultiGraph::new();
    let mut found = 0usize;
    let mut last_line = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match fields.as_slice() {
            ["p", "edge", n, m] => {
                if header.is_some() {
                    return Err(ParseError::Malformed {
                        line,
                        msg: "duplicate problem line".into(),
                    });
                }
                let n: usize = n.parse().map_err(|_| ParseError::Malformed {
                    line,
                    msg: format!("bad vertex count {n:?}"),
                })?;
                let m: usize = m.parse().map_err(|_| ParseError::Malformed {
                    line,
                    msg: format!("bad edge count {m:?}"),
                })?;
                header = Some((n, m, line));
                graph = MultiGraph::with_vertices(n);
            }
            ["e", u, v] => {
                let (n, _, _) = header.ok_or(ParseError::Malformed {
                    line,
                    msg: "edge before the problem line".into(),
                })?;
                let endpoint = |s: &str| -> Result<VertexId, ParseError> {
                    let x: u64 = s.parse().map_err(|_| ParseError::Malformed {
                        line,
                        msg: format!("bad vertex index {s:?}"),
                    })?;
                    if x < 1 || x > n as u64 {
                        return Err(ParseError::IndexOutOfRange { line, index: x, n });
                    }
                    Ok(VertexId((x - 1) as u32))
                };
                let (a, b) = (endpoint(u)?, endpoint(v)?);
                graph.add_edge(a, b).expect("endpoints checked against n");
                found += 1;
            }
            _ => {
                return Err(ParseError::Malformed {
                    line,
                    msg: format!("unrecognized line {t:?}"),
                })
            }
        }
    }
    let (_, declared, _) = header.ok_or(ParseError::MissingHeader)?;
    if declared != found {
        return Err(ParseError::EdgeCountMismatch {
            line: last_line,
            declared,
            found,
        });
    }
    Ok(graph)
}

/// Canonical text form: vertices renumbered 1..n in ascending id order,
/// edges sorted, multiplicities written as repeated lines, loops as `e u u`.
/// `parse_graph(serialize_graph(g))` reproduces g exactly for graphs whose
/// ids are already dense.
pub fn serialize_graph(g: &MultiGraph) -> String {
    let renumber: BTreeMap<VertexId, usize> = g
        .vertices()
        .enumerate()
        .map(|(i, v)| (v, i + 1))
        .collect();
    let mut lines: Vec<(usize, usize)> = Vec::new();
    for v in g.vertices() {
        for _ in 0..g.loops(v) {
            lines.push((renumber[&v], renumber[&v]));
        }
        for (u, m) in g.neighbors(v) {
            if u > v {
                for _ in 0..m {
                    lines.push((renumber[&v], renumber[&u]));
                }
            }
        }
    }
    lines.sort_unstable();
    let mut out = format!("p edge {} {}\n", g.vertex_count(), lines.len());
    for (a, b) in lines {
        out.push_str(&format!("e {a} {b}\n"));
    }
    out
}
