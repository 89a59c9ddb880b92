//! JSON shapes written to standard output.

use std::collections::BTreeMap;

use flame_core::digraph::{CapacityVector, EdgeId, RootedDigraph, Vertex, VertexSet};
use flame_core::flame::FlameReport;
use flame_core::flow::{TightSet, WeightedEdges};
use flame_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub input: InputInfo,
    pub mode: &'static str,
    pub vertex_order: Vec<String>,
    pub vertex_map: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
    pub payload: Value,
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct EdgeValue {
    pub id: usize,
    pub tail: String,
    pub head: String,
    pub value: String,
}

pub fn vertex_map(d: &RootedDigraph) -> BTreeMap<String, usize> {
    d.vertices().map(|v| (d.name(v).to_string(), v.0)).collect()
}

pub fn names(d: &RootedDigraph, vs: impl IntoIterator<Item = Vertex>) -> Vec<String> {
    vs.into_iter().map(|v| d.name(v).to_string()).collect()
}

pub fn set(d: &RootedDigraph, vs: &VertexSet) -> Vec<String> {
    names(d, vs.iter().copied())
}

/// The nonzero entries of `c`, in edge-id order.
pub fn edge_values(d: &RootedDigraph, c: &CapacityVector<Rational>) -> Vec<EdgeValue> {
    c.iter()
        .map(|(id, value)| {
            let e = d.edge(id).expect("vectors live on the digraph's edges");
            EdgeValue {
                id: id.0,
                tail: d.name(e.tail).to_string(),
                head: d.name(e.head).to_string(),
                value: value.to_string(),
            }
        })
        .collect()
}

pub fn edge(d: &RootedDigraph, id: EdgeId) -> Value {
    let e = d.edge(id).expect("edge ids come from the digraph");
    json!({ "id": id.0, "tail": d.name(e.tail), "head": d.name(e.head) })
}

pub fn flame_report(d: &RootedDigraph, report: &FlameReport<Rational>) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            json!({
                "vertex": d.name(row.vertex),
                "lambda_c": row.lambda_c.to_string(),
                "lambda_f": row.lambda_f.to_string(),
                "rho_f": row.rho_f.to_string(),
            })
        })
        .collect();
    json!({
        "holds": report.holds(),
        "is_flame": report.is_flame,
        "preserves": report.preserves,
        "bounded": report.bounded,
        "integral": report.integral,
        "first_violation": report.first_violation().map(|v| d.name(v)),
        "rows": rows,
    })
}

pub fn tight_set<T: ToString>(d: &RootedDigraph, t: &TightSet<T>) -> Value {
    json!({
        "target": d.name(t.target),
        "set": set(d, &t.set),
        "value": t.value.to_string(),
    })
}

pub fn walk(d: &RootedDigraph, w: &WeightedEdges<Rational>) -> Value {
    let mut vertices = Vec::with_capacity(w.edges.len() + 1);
    for (i, &id) in w.edges.iter().enumerate() {
        let e = d.edge(id).expect("walks use the digraph's edges");
        if i == 0 {
            vertices.push(d.name(e.tail));
        }
        vertices.push(d.name(e.head));
    }
    json!({
        "weight": w.weight.to_string(),
        "edges": w.edges.iter().map(|id| id.0).collect::<Vec<_>>(),
        "vertices": vertices,
    })
}
