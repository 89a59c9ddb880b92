//! Line-oriented graph format.
//!
//! ```text
//! # comment
//! root r
//! arc r a 1/2
//! arc a v
//! ```
//!
//! `root` must be the first non-comment line and appear once. `vertex v`
//! declares a vertex without adding an arc, which is how isolated vertices
//! are written. Vertices are numbered by first appearance. Each `arc`
//! takes an optional capacity written as an integer, a decimal or `p/q`,
//! defaulting to 1. Edge ids are assigned in file order starting from 0.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::digraph::{CapacityVector, Edge, EdgeId, RootedDigraph, Vertex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct ParsedGraph<T> {
    pub digraph: RootedDigraph,
    pub capacities: CapacityVector<T>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse<T: Scalar>(input: &str) -> Result<ParsedGraph<T>> {
    let mut names: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, Vertex> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut capacities = CapacityVector::zero();
    let mut root_seen = false;

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "root" => {
                if root_seen {
                    return Err(parse_error(line_no, "`root` given more than once"));
                }
                let [_, name] = tokens[..] else {
                    return Err(parse_error(line_no, "expected `root <vertex>`"));
                };
                names.push(name.to_string());
                index.insert(name.to_string(), Vertex(0));
                root_seen = true;
            }
            "vertex" => {
                if !root_seen {
                    return Err(parse_error(line_no, "`root` must come first"));
                }
                let [_, name] = tokens[..] else {
                    return Err(parse_error(line_no, "expected `vertex <name>`"));
                };
                if index.contains_key(name) {
                    return Err(parse_error(
                        line_no,
                        format!("vertex `{name}` already declared"),
                    ));
                }
                names.push(name.to_string());
                index.insert(name.to_string(), Vertex(names.len() - 1));
            }
            "arc" => {
                if !root_seen {
                    return Err(parse_error(line_no, "`root` must come first"));
                }
                let (tail, head, capacity) = match tokens[..] {
                    [_, tail, head] => (tail, head, T::one()),
                    [_, tail, head, cap] => {
                        let value = T::parse_exact(cap).ok_or_else(|| {
                            parse_error(line_no, format!("malformed capacity `{cap}`"))
                        })?;
                        if value.is_negative_value() {
                            return Err(parse_error(line_no, format!("negative capacity `{cap}`")));
                        }
                        (tail, head, value)
                    }
                    _ => {
                        return Err(parse_error(
                            line_no,
                            "expected `arc <tail> <head> [<capacity>]`",
                        ))
                    }
                };
                if tail == head {
                    return Err(parse_error(line_no, format!("loop at `{tail}`")));
                }
                let mut intern = |name: &str| {
                    *index.entry(name.to_string()).or_insert_with(|| {
                        names.push(name.to_string());
                        Vertex(names.len() - 1)
                    })
                };
                let id = EdgeId(edges.len());
                let edge = Edge {
                    id,
                    tail: intern(tail),
                    head: intern(head),
                };
                edges.push(edge);
                capacities.set(id, capacity)?;
            }
            other => {
                return Err(parse_error(line_no, format!("unknown directive `{other}`")));
            }
        }
    }
    if !root_seen {
        return Err(parse_error(0, "missing `root` line"));
    }
    let digraph = RootedDigraph::new(names, Vertex(0), edges)?;
    Ok(ParsedGraph {
        digraph,
        capacities,
    })
}

/// Writes a graph in the text format. Edges are emitted in their stored
/// order, so ids are preserved only when they are `0..m` in that order.
/// `vertex` lines are added when arc order alone would renumber vertices.
pub fn write<T: Scalar>(d: &RootedDigraph, c: &CapacityVector<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "root {}", d.name(d.root()));
    let mut seen = vec![d.root()];
    for e in d.edges() {
        for v in [e.tail, e.head] {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
    }
    if seen.len() != d.vertex_count() || seen.iter().enumerate().any(|(i, v)| v.0 != i) {
        for v in d.non_root() {
            let _ = writeln!(out, "vertex {}", d.name(v));
        }
    }
    for e in d.edges() {
        let _ = writeln!(
            out,
            "arc {} {} {}",
            d.name(e.tail),
            d.name(e.head),
            c.get(e.id)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn parses_fixture_with_capacities() {
        let g = parse::<Rational>(include_str!("../fixtures/fx5.graph")).unwrap();
        assert_eq!(g.digraph.edge_count(), 3);
        assert_eq!(g.digraph.names(), &["r", "a", "v"]);
        assert_eq!(
            g.capacities.get(EdgeId(0)),
            Rational::from_ratio(1, 2).unwrap()
        );
        assert_eq!(
            g.capacities.get(EdgeId(2)),
            Rational::from_ratio(1, 3).unwrap()
        );
    }

    #[test]
    fn keeps_isolated_vertices() {
        let g = parse::<i64>("root r\nvertex x\narc r a 2\n").unwrap();
        assert_eq!(g.digraph.names(), &["r", "x", "a"]);
        let back = parse::<i64>(&write(&g.digraph, &g.capacities)).unwrap();
        assert_eq!(back.digraph, g.digraph);
        assert_eq!(back.capacities, g.capacities);
        assert!(parse::<i64>("root r\nvertex r\n").is_err());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse::<Rational>("root r\n\narc r a x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse::<Rational>("# c\narc r a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse::<Rational>("root r\nroot s\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse::<Rational>("root r\narc a a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse::<Rational>("root r\narc r a -1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse::<Rational>("").is_err());
    }

    #[test]
    fn integral_scalar_rejects_fractional_capacity() {
        assert!(parse::<i64>("root r\narc r a 0.5\n").is_err());
        assert!(parse::<i64>("root r\narc r a 2\n").is_ok());
    }

    #[test]
    fn write_then_parse_is_identity() {
        let g = parse::<Rational>(include_str!("../fixtures/fx5.graph")).unwrap();
        let text = write(&g.digraph, &g.capacities);
        let back = parse::<Rational>(&text).unwrap();
        assert_eq!(back.digraph, g.digraph);
        assert_eq!(back.capacities, g.capacities);
    }
}
