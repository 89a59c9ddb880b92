//! Rooted multidigraphs, capacity vectors and the two structural reductions
//! used throughout the crate: normalization and set contraction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense internal vertex index. The root of a graph built by
/// [`RootedDigraph::from_arcs`] or the text parser is always index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub usize);

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Stable edge identifier. Parallel edges have distinct ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: Vertex,
    pub head: Vertex,
}

pub type VertexSet = BTreeSet<Vertex>;

/// A digraph with a designated root. Loops are rejected at construction;
/// edges into the root are tolerated until [`normalize`] drops them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedDigraph {
    names: Vec<String>,
    root: Vertex,
    edges: Vec<Edge>,
}

impl RootedDigraph {
    pub fn new(names: Vec<String>, root: Vertex, edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        if root.0 >= n {
            return Err(Error::VertexOutOfRange(root));
        }
        let mut seen = BTreeSet::new();
        for edge in &edges {
            for end in [edge.tail, edge.head] {
                if end.0 >= n {
                    return Err(Error::VertexOutOfRange(end));
                }
            }
            if edge.tail == edge.head {
                return Err(Error::LoopEdge {
                    edge: edge.id,
                    vertex: names[edge.tail.0].clone(),
                });
            }
            if !seen.insert(edge.id) {
                return Err(Error::DuplicateEdgeId(edge.id));
            }
        }
        Ok(Self { names, root, edges })
    }

    /// Builds a graph from named arcs. Vertices are numbered by first
    /// appearance with the root first; edge ids follow arc order.
    pub fn from_arcs(root: &str, arcs: &[(&str, &str)]) -> Result<Self> {
        let mut names = vec![root.to_string()];
        let mut index = BTreeMap::from([(root.to_string(), Vertex(0))]);
        let mut intern = |name: &str| -> Vertex {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                Vertex(names.len() - 1)
            })
        };
        let edges = arcs
            .iter()
            .enumerate()
            .map(|(i, (tail, head))| Edge {
                id: EdgeId(i),
                tail: intern(tail),
                head: intern(head),
            })
            .collect();
        Self::new(names, Vertex(0), edges)
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.names.len()).map(Vertex)
    }

    /// All vertices except the root, in ascending index order.
    pub fn non_root(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices().filter(move |&v| v != self.root)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Vertex)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.0 < self.names.len()
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.head == v)
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.tail == v)
    }

    /// Edges with head in `set` and tail outside it.
    pub fn entering<'a>(&'a self, set: &'a VertexSet) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges
            .iter()
            .filter(move |e| set.contains(&e.head) && !set.contains(&e.tail))
    }

    /// Edges with tail in `set` and head outside it.
    pub fn leaving<'a>(&'a self, set: &'a VertexSet) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges
            .iter()
            .filter(move |e| set.contains(&e.tail) && !set.contains(&e.head))
    }

    /// Sum of `c` over the edges entering `set`.
    pub fn in_capacity<T: Scalar>(&self, c: &CapacityVector<T>, set: &VertexSet) -> T {
        self.entering(set)
            .fold(T::zero(), |acc, e| acc + c.get(e.id))
    }

    /// Sum of `c` over the edges leaving `set`.
    pub fn out_capacity<T: Scalar>(&self, c: &CapacityVector<T>, set: &VertexSet) -> T {
        self.leaving(set)
            .fold(T::zero(), |acc, e| acc + c.get(e.id))
    }

    /// In-capacity of a single vertex.
    pub fn in_degree<T: Scalar>(&self, c: &CapacityVector<T>, v: Vertex) -> T {
        self.in_edges(v).fold(T::zero(), |acc, e| acc + c.get(e.id))
    }

    /// The subgraph keeping only the listed edges; vertices are unchanged.
    pub fn restrict(&self, keep: &BTreeSet<EdgeId>) -> RootedDigraph {
        RootedDigraph {
            names: self.names.clone(),
            root: self.root,
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(&e.id))
                .copied()
                .collect(),
        }
    }

    /// The graph with one edge removed.
    pub fn without_edge(&self, id: EdgeId) -> RootedDigraph {
        RootedDigraph {
            names: self.names.clone(),
            root: self.root,
            edges: self.edges.iter().filter(|e| e.id != id).copied().collect(),
        }
    }

    /// Checks that `order` lists every non-root vertex exactly once.
    pub fn check_order(&self, order: &[Vertex]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &v in order {
            if !self.contains(v) {
                return Err(Error::InvalidOrder(format!("{v} is not a vertex")));
            }
            if v == self.root {
                return Err(Error::InvalidOrder("the root cannot appear".into()));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidOrder(format!(
                    "`{}` appears twice",
                    self.name(v)
                )));
            }
        }
        if seen.len() + 1 != self.vertex_count() {
            return Err(Error::InvalidOrder(format!(
                "{} of {} non-root vertices listed",
                seen.len(),
                self.vertex_count() - 1
            )));
        }
        Ok(())
    }
}

/// Nonnegative per-edge values. Absent entries read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityVector<T> {
    values: BTreeMap<EdgeId, T>,
}

impl<T: Scalar> Default for CapacityVector<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> CapacityVector<T> {
    pub fn zero() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    /// Every edge of `d` at capacity one.
    pub fn unit(d: &RootedDigraph) -> Self {
        Self::constant(d, T::one())
    }

    pub fn constant(d: &RootedDigraph, value: T) -> Self {
        Self {
            values: d.edge_ids().map(|id| (id, value.clone())).collect(),
        }
    }

    /// Indicator vector of an edge subset.
    pub fn indicator(edges: &BTreeSet<EdgeId>) -> Self {
        Self {
            values: edges.iter().map(|&id| (id, T::one())).collect(),
        }
    }

    /// Unit vector of one edge.
    pub fn basis(edge: EdgeId) -> Self {
        Self {
            values: BTreeMap::from([(edge, T::one())]),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (EdgeId, T)>) -> Result<Self> {
        let mut out = Self::zero();
        for (id, value) in pairs {
            out.set(id, value)?;
        }
        Ok(out)
    }

    pub fn get(&self, id: EdgeId) -> T {
        self.values.get(&id).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, id: EdgeId, value: T) -> Result<()> {
        if value.is_negative_value() {
            return Err(Error::NegativeCapacity(id));
        }
        if value.is_zero() {
            self.values.remove(&id);
        } else {
            self.values.insert(id, value);
        }
        Ok(())
    }

    /// Adds `amount` to one coordinate.
    pub fn add(&mut self, id: EdgeId, amount: T) -> Result<()> {
        let value = self.get(id) + amount;
        self.set(id, value)
    }

    /// Nonzero entries in edge-id order.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &T)> + '_ {
        self.values.iter().map(|(&id, v)| (id, v))
    }

    pub fn support(&self) -> BTreeSet<EdgeId> {
        self.values.keys().copied().collect()
    }

    pub fn is_integral(&self) -> bool {
        self.values.values().all(Scalar::is_integral)
    }

    /// First edge whose value is not integral.
    pub fn first_fractional(&self) -> Option<EdgeId> {
        self.values
            .iter()
            .find(|(_, v)| !v.is_integral())
            .map(|(&id, _)| id)
    }

    /// `true` when `self(e) <= other(e)` for every edge.
    pub fn le(&self, other: &Self) -> bool {
        self.first_exceeding(other).is_none()
    }

    /// First edge with `self(e) > other(e)`.
    pub fn first_exceeding(&self, other: &Self) -> Option<EdgeId> {
        self.values
            .iter()
            .find(|(&id, v)| **v > other.get(id))
            .map(|(&id, _)| id)
    }

    /// Keeps only the entries for edges present in `d`.
    pub fn restricted_to(&self, d: &RootedDigraph) -> Self {
        let ids: BTreeSet<_> = d.edge_ids().collect();
        Self {
            values: self
                .values
                .iter()
                .filter(|(id, _)| ids.contains(id))
                .map(|(&id, v)| (id, v.clone()))
                .collect(),
        }
    }

    pub fn total(&self) -> T {
        self.values
            .values()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Applies `f` to every nonzero entry, e.g. to change scalar type.
    pub fn try_map<U: Scalar>(
        &self,
        mut f: impl FnMut(&T) -> Option<U>,
    ) -> Option<CapacityVector<U>> {
        let mut out = CapacityVector::zero();
        for (&id, v) in &self.values {
            out.set(id, f(v)?).ok()?;
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Integer capacities; parallel edges are kept as distinct elements.
    Integral,
    /// Rational capacities; parallel edges are merged.
    Fractional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// An edge into the root was dropped.
    DroppedRootInEdge { edge: EdgeId, tail: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DroppedRootInEdge { edge, tail } => {
                write!(f, "dropped edge {edge} from `{tail}` into the root")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Normalized<T> {
    pub digraph: RootedDigraph,
    pub capacities: CapacityVector<T>,
    /// Surviving edge id -> original edge ids it stands for.
    pub provenance: BTreeMap<EdgeId, Vec<EdgeId>>,
    pub warnings: Vec<Warning>,
}

/// Drops edges into the root and, in fractional mode, merges every bundle
/// of parallel edges into its lowest-id member carrying the summed capacity.
/// Integral mode additionally rejects non-integral capacities.
pub fn normalize<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    mode: Mode,
) -> Result<Normalized<T>> {
    let mut warnings = Vec::new();
    let mut edges = Vec::new();
    let mut capacities = CapacityVector::zero();
    let mut provenance: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    let mut bundle: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();

    for edge in d.edges() {
        if edge.tail == edge.head {
            return Err(Error::LoopEdge {
                edge: edge.id,
                vertex: d.name(edge.tail).to_string(),
            });
        }
        let value = c.get(edge.id);
        if value.is_negative_value() {
            return Err(Error::NegativeCapacity(edge.id));
        }
        if mode == Mode::Integral && !value.is_integral() {
            return Err(Error::NonIntegral(edge.id));
        }
        if edge.head == d.root() {
            warnings.push(Warning::DroppedRootInEdge {
                edge: edge.id,
                tail: d.name(edge.tail).to_string(),
            });
            continue;
        }
        if mode == Mode::Fractional {
            if let Some(&slot) = bundle.get(&(edge.tail, edge.head)) {
                let keep: Edge = edges[slot];
                capacities.add(keep.id, value)?;
                provenance.entry(keep.id).or_default().push(edge.id);
                continue;
            }
            bundle.insert((edge.tail, edge.head), edges.len());
        }
        edges.push(*edge);
        capacities.set(edge.id, value)?;
        provenance.insert(edge.id, vec![edge.id]);
    }

    Ok(Normalized {
        digraph: RootedDigraph::new(d.names.clone(), d.root, edges)?,
        capacities,
        provenance,
        warnings,
    })
}

/// Result of contracting a vertex set.
#[derive(Debug, Clone)]
pub struct Contraction<T> {
    pub digraph: RootedDigraph,
    pub capacities: CapacityVector<T>,
    /// Old vertex index -> new vertex index. Every member of the contracted
    /// set maps to the image of `into`.
    pub vertex_map: Vec<Vertex>,
}

/// Replaces all of `set` by the single vertex `into`, deleting edges inside
/// `set` and retargeting the rest. Edge ids and capacities are preserved.
pub fn contract_set<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    set: &VertexSet,
    into: Vertex,
) -> Result<Contraction<T>> {
    if set.contains(&d.root()) {
        return Err(Error::RootInSet);
    }
    if !set.contains(&into) {
        return Err(Error::TargetNotInSet(into));
    }
    for &v in set {
        d.check_vertex(v)?;
    }

    let mut names = Vec::new();
    let mut vertex_map = vec![Vertex(usize::MAX); d.vertex_count()];
    for v in d.vertices() {
        if set.contains(&v) && v != into {
            continue;
        }
        vertex_map[v.0] = Vertex(names.len());
        names.push(d.name(v).to_string());
    }
    let image = vertex_map[into.0];
    for &v in set {
        vertex_map[v.0] = image;
    }

    let edges: Vec<Edge> = d
        .edges()
        .iter()
        .filter(|e| !(set.contains(&e.tail) && set.contains(&e.head)))
        .map(|e| Edge {
            id: e.id,
            tail: vertex_map[e.tail.0],
            head: vertex_map[e.head.0],
        })
        .collect();
    let digraph = RootedDigraph::new(names, vertex_map[d.root().0], edges)?;
    let capacities = c.restricted_to(&digraph);
    Ok(Contraction {
        digraph,
        capacities,
        vertex_map,
    })
}
