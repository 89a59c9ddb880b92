//! Reading graphs and edge vectors from disk.

use std::path::Path;

use flame_core::digraph::{normalize, CapacityVector, EdgeId, Mode, Normalized, RootedDigraph};
use flame_core::text::{self, ParsedGraph};
use flame_core::{Rational, Scalar};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub struct Input {
    pub path: String,
    pub sha256: String,
    pub contents: String,
    pub graph: ParsedGraph<Rational>,
}

fn read(path: &Path) -> Result<(String, String), CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let contents = String::from_utf8(bytes).map_err(|e| CliError::Input {
        path: shown,
        line: 0,
        message: format!("not valid UTF-8: {e}"),
    })?;
    Ok((contents, digest))
}

fn parse_graph(path: &str, contents: &str) -> Result<ParsedGraph<Rational>, CliError> {
    text::parse::<Rational>(contents).map_err(|err| match err {
        flame_core::Error::Parse { line, message } => CliError::Input {
            path: path.to_string(),
            line,
            message,
        },
        source => CliError::Core {
            path: path.to_string(),
            source,
        },
    })
}

pub fn load(path: &Path) -> Result<Input, CliError> {
    let (contents, sha256) = read(path)?;
    let shown = path.display().to_string();
    let graph = parse_graph(&shown, &contents)?;
    Ok(Input {
        path: shown,
        sha256,
        contents,
        graph,
    })
}

/// Integral when every capacity is an integer, unless overridden.
pub fn choose_mode(graph: &ParsedGraph<Rational>, requested: Option<Mode>) -> Mode {
    requested.unwrap_or(if graph.capacities.is_integral() {
        Mode::Integral
    } else {
        Mode::Fractional
    })
}

pub fn prepare(input: &Input, mode: Mode) -> Result<Normalized<Rational>, CliError> {
    normalize(&input.graph.digraph, &input.graph.capacities, mode).map_err(|source| {
        CliError::Core {
            path: input.path.clone(),
            source,
        }
    })
}

/// Every capacity must be exactly 1, as for a plain multigraph.
pub fn require_unit(input: &Input) -> Result<(), CliError> {
    let one = Rational::from_integer(1.into());
    for e in input.graph.digraph.edges() {
        if input.graph.capacities.get(e.id) != one {
            return Err(CliError::Input {
                path: input.path.clone(),
                line: arc_line(&input.contents, e.id.0),
                message: format!("edge {} needs capacity 1 in integral mode", e.id),
            });
        }
    }
    Ok(())
}

/// Line number of the `index`-th `arc` directive, or 0 if there is none.
fn arc_line(contents: &str, index: usize) -> usize {
    contents
        .lines()
        .enumerate()
        .filter(|(_, l)| l.split_whitespace().next() == Some("arc"))
        .nth(index)
        .map_or(0, |(i, _)| i + 1)
}

#[derive(Deserialize)]
struct ReportDoc {
    payload: Option<FlameDoc>,
    flame: Option<Vec<EdgeDoc>>,
}

#[derive(Deserialize)]
struct FlameDoc {
    flame: Option<Vec<EdgeDoc>>,
}

#[derive(Deserialize)]
struct EdgeDoc {
    id: usize,
    tail: String,
    head: String,
    value: String,
}

/// A vector on the edges of `host`, given either in the graph text format
/// (arc `i` must repeat the tail and head of host arc `i`) or as the JSON
/// report of `extract`.
pub fn load_vector(
    path: &Path,
    host: &RootedDigraph,
) -> Result<CapacityVector<Rational>, CliError> {
    let (contents, _) = read(path)?;
    let shown = path.display().to_string();
    let input_error = |line: usize, message: String| CliError::Input {
        path: shown.clone(),
        line,
        message,
    };
    let mut pairs = Vec::new();
    if contents.trim_start().starts_with('{') {
        let doc: ReportDoc =
            serde_json::from_str(&contents).map_err(|e| input_error(e.line(), e.to_string()))?;
        let edges = doc
            .payload
            .and_then(|p| p.flame)
            .or(doc.flame)
            .ok_or_else(|| input_error(0, "no `payload.flame` or `flame` array".into()))?;
        for (k, e) in edges.into_iter().enumerate() {
            let value = Rational::parse_exact(&e.value)
                .filter(|v| !v.is_negative_value())
                .ok_or_else(|| {
                    input_error(0, format!("entry {k}: malformed value `{}`", e.value))
                })?;
            check_arc(host, e.id, &e.tail, &e.head).map_err(|m| input_error(0, m))?;
            pairs.push((EdgeId(e.id), value));
        }
    } else {
        let graph = parse_graph(&shown, &contents)?;
        let d = &graph.digraph;
        if d.name(d.root()) != host.name(host.root()) {
            return Err(input_error(0, "root differs from the host graph".into()));
        }
        for e in d.edges() {
            check_arc(host, e.id.0, d.name(e.tail), d.name(e.head))
                .map_err(|m| input_error(arc_line(&contents, e.id.0), m))?;
            pairs.push((e.id, graph.capacities.get(e.id)));
        }
    }
    CapacityVector::from_pairs(pairs).map_err(|source| CliError::Core {
        path: shown.clone(),
        source,
    })
}

fn check_arc(host: &RootedDigraph, id: usize, tail: &str, head: &str) -> Result<(), String> {
    let Some(e) = host.edge(EdgeId(id)) else {
        return Err(format!("edge {} is not in the host graph", EdgeId(id)));
    };
    if host.name(e.tail) != tail || host.name(e.head) != head {
        return Err(format!(
            "edge {} is {} -> {} in the host graph, not {tail} -> {head}",
            EdgeId(id),
            host.name(e.tail),
            host.name(e.head)
        ));
    }
    Ok(())
}

/// Moves a vector given on the input edges onto the normalized edges,
/// summing over merged bundles. Values on dropped edges are reported.
pub fn carry(
    normalized: &Normalized<Rational>,
    original: &CapacityVector<Rational>,
    warnings: &mut Vec<String>,
) -> CapacityVector<Rational> {
    let mut out = CapacityVector::zero();
    let mut used = std::collections::BTreeSet::new();
    for (&keep, sources) in &normalized.provenance {
        for &id in sources {
            used.insert(id);
            out.add(keep, original.get(id))
                .expect("values are nonnegative");
        }
    }
    for (id, value) in original.iter() {
        if !used.contains(&id) {
            warnings.push(format!("ignored value {value} on dropped edge {id}"));
        }
    }
    out
}
