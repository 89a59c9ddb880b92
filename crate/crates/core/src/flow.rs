//! Exact maximum flow, maximal minimum cuts and greedy flow decomposition.
//!
//! Maximum flows are computed with blocking flows over BFS level graphs
//! (Dinic), which needs `O(n^2 m)` augmentations independent of the
//! capacity values, so it terminates on rationals. Returned flows are
//! cycle-free.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::digraph::{CapacityVector, Edge, EdgeId, RootedDigraph, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::scalar::{min_of, Scalar};

/// A root-to-sink flow: conservation holds away from the root and the sink,
/// nothing enters the root and nothing leaves the sink.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow<T> {
    sink: Vertex,
    values: CapacityVector<T>,
    amount: T,
}

impl<T: Scalar> Flow<T> {
    /// Validates `values` as a flow towards `sink` and computes its amount.
    pub fn from_values(d: &RootedDigraph, sink: Vertex, values: CapacityVector<T>) -> Result<Self> {
        d.check_vertex(sink)?;
        if sink == d.root() {
            return Err(Error::SinkIsRoot);
        }
        let known: BTreeSet<EdgeId> = d.edge_ids().collect();
        if let Some((id, _)) = values.iter().find(|(id, _)| !known.contains(id)) {
            return Err(Error::UnknownEdge(id));
        }
        let n = d.vertex_count();
        let mut inflow = vec![T::zero(); n];
        let mut outflow = vec![T::zero(); n];
        for e in d.edges() {
            let x = values.get(e.id);
            inflow[e.head.0] = inflow[e.head.0].clone() + x.clone();
            outflow[e.tail.0] = outflow[e.tail.0].clone() + x;
        }
        let root = d.root();
        for v in d.vertices() {
            let ok = if v == root {
                inflow[v.0].is_zero()
            } else if v == sink {
                outflow[v.0].is_zero()
            } else {
                inflow[v.0] == outflow[v.0]
            };
            if !ok {
                return Err(Error::ConservationViolated(v));
            }
        }
        let amount = outflow[root.0].clone();
        Ok(Self {
            sink,
            values,
            amount,
        })
    }

    pub fn sink(&self) -> Vertex {
        self.sink
    }

    pub fn values(&self) -> &CapacityVector<T> {
        &self.values
    }

    pub fn amount(&self) -> &T {
        &self.amount
    }

    pub fn value(&self, id: EdgeId) -> T {
        self.values.get(id)
    }

    pub fn into_values(self) -> CapacityVector<T> {
        self.values
    }
}

/// Residual network over the edges of a digraph. Edge `i` (by position)
/// owns arcs `2i` (forward) and `2i + 1` (backward).
struct Network<T> {
    heads: Vec<usize>,
    residual: Vec<T>,
    adjacency: Vec<Vec<usize>>,
}

impl<T: Scalar> Network<T> {
    fn new(d: &RootedDigraph, c: &CapacityVector<T>) -> Self {
        let mut adjacency = vec![Vec::new(); d.vertex_count()];
        let mut heads = Vec::with_capacity(2 * d.edge_count());
        let mut residual = Vec::with_capacity(2 * d.edge_count());
        for (i, e) in d.edges().iter().enumerate() {
            heads.push(e.head.0);
            residual.push(c.get(e.id));
            heads.push(e.tail.0);
            residual.push(T::zero());
            adjacency[e.tail.0].push(2 * i);
            adjacency[e.head.0].push(2 * i + 1);
        }
        Self {
            heads,
            residual,
            adjacency,
        }
    }

    fn levels(&self, source: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.adjacency.len()];
        level[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let next = level[u].map(|l| l + 1);
            for &arc in &self.adjacency[u] {
                let w = self.heads[arc];
                if level[w].is_none() && self.residual[arc] > T::zero() {
                    level[w] = next;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    /// Pushes one augmenting path in the level graph; `cursor` keeps the
    /// current-arc position per vertex so each blocking phase is linear in
    /// the number of arcs per path found.
    fn augment(
        &mut self,
        u: usize,
        sink: usize,
        limit: Option<T>,
        level: &[Option<usize>],
        cursor: &mut [usize],
    ) -> Option<T> {
        if u == sink {
            return limit;
        }
        while cursor[u] < self.adjacency[u].len() {
            let arc = self.adjacency[u][cursor[u]];
            let w = self.heads[arc];
            let admissible = self.residual[arc] > T::zero()
                && matches!((level[u], level[w]), (Some(a), Some(b)) if b == a + 1);
            if admissible {
                let room = self.residual[arc].clone();
                let bound = match &limit {
                    Some(l) => min_of(l.clone(), room),
                    None => room,
                };
                if let Some(pushed) = self.augment(w, sink, Some(bound), level, cursor) {
                    self.residual[arc] = self.residual[arc].clone() - pushed.clone();
                    self.residual[arc ^ 1] = self.residual[arc ^ 1].clone() + pushed.clone();
                    return Some(pushed);
                }
            }
            cursor[u] += 1;
        }
        None
    }

    fn run(&mut self, source: usize, sink: usize) {
        loop {
            let level = self.levels(source);
            if level[sink].is_none() {
                return;
            }
            let mut cursor = vec![0; self.adjacency.len()];
            while self
                .augment(source, sink, None, &level, &mut cursor)
                .is_some()
            {}
        }
    }
}

/// Finds a directed cycle among the edges for which `active` holds.
/// Returns edge positions in traversal order.
fn find_cycle(d: &RootedDigraph, active: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = d.vertex_count();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in d.edges().iter().enumerate() {
        if active(i) {
            out[e.tail.0].push(i);
        }
    }
    let edges = d.edges();
    let mut mark = vec![Mark::New; n];
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        // Stack of (vertex, next out-edge slot); `via` holds the edge used
        // to enter each stacked vertex.
        let mut stack = vec![(start, 0usize)];
        let mut via: Vec<usize> = Vec::new();
        mark[start] = Mark::Open;
        while let Some(&mut (u, ref mut slot)) = stack.last_mut() {
            if *slot < out[u].len() {
                let i = out[u][*slot];
                *slot += 1;
                let w = edges[i].head.0;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                        via.push(i);
                    }
                    Mark::Open => {
                        let pos = stack.iter().position(|&(x, _)| x == w)?;
                        let mut cycle = via[pos..].to_vec();
                        cycle.push(i);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                stack.pop();
                via.pop();
            }
        }
    }
    None
}

/// Removes every directed cycle from the support of `x`.
fn cancel_cycles<T: Scalar>(d: &RootedDigraph, x: &mut [T]) {
    while let Some(cycle) = find_cycle(d, |i| x[i] > T::zero()) {
        let bottleneck = cycle
            .iter()
            .map(|&i| x[i].clone())
            .reduce(min_of)
            .expect("cycles are nonempty");
        for &i in &cycle {
            x[i] = x[i].clone() - bottleneck.clone();
        }
    }
}

/// A maximum flow from the root to `sink` under capacity `c`, cycle-free.
/// Integral capacities give an integral flow.
pub fn max_flow<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    sink: Vertex,
) -> Result<Flow<T>> {
    d.check_vertex(sink)?;
    if sink == d.root() {
        return Err(Error::SinkIsRoot);
    }
    let mut net = Network::new(d, c);
    net.run(d.root().0, sink.0);

    let mut x: Vec<T> = d
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| c.get(e.id) - net.residual[2 * i].clone())
        .collect();
    cancel_cycles(d, &mut x);

    let values =
        CapacityVector::from_pairs(d.edges().iter().zip(x).map(|(e, value)| (e.id, value)))?;
    Flow::from_values(d, sink, values)
}

/// Flow-connectivity from the root to `v`.
pub fn lambda<T: Scalar>(d: &RootedDigraph, c: &CapacityVector<T>, v: Vertex) -> Result<T> {
    Ok(max_flow(d, c, v)?.amount)
}

/// Flow-connectivity of every non-root vertex.
pub fn lambda_all<T: Scalar>(d: &RootedDigraph, c: &CapacityVector<T>) -> BTreeMap<Vertex, T> {
    d.non_root()
        .map(|v| {
            let value = lambda(d, c, v).expect("non-root vertex of this graph");
            (v, value)
        })
        .collect()
}

/// The inclusion-wise largest minimizer of the in-capacity over sets that
/// contain the target and avoid the root.
#[derive(Debug, Clone, PartialEq)]
pub struct TightSet<T> {
    pub target: Vertex,
    pub set: VertexSet,
    pub value: T,
}

/// Vertices reachable from the root in the residual graph of `x`.
fn residual_reach<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    x: &CapacityVector<T>,
) -> Vec<bool> {
    let n = d.vertex_count();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in d.edges() {
        let flow = x.get(e.id);
        if flow < c.get(e.id) {
            adjacency[e.tail.0].push(e.head.0);
        }
        if flow > T::zero() {
            adjacency[e.head.0].push(e.tail.0);
        }
    }
    let mut seen = vec![false; n];
    let root = d.root().0;
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// The largest tight set for `v`: everything not reachable from the root
/// in the residual graph of a maximum flow.
pub fn min_cut_maximal<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    v: Vertex,
) -> Result<TightSet<T>> {
    let x = max_flow(d, c, v)?;
    let reach = residual_reach(d, c, &x.values);
    let set: VertexSet = d.vertices().filter(|u| !reach[u.0]).collect();
    debug_assert!(set.contains(&v));
    let value = d.in_capacity(c, &set);
    debug_assert!(value == x.amount);
    Ok(TightSet {
        target: v,
        set,
        value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdges<T> {
    pub edges: Vec<EdgeId>,
    pub weight: T,
}

/// A flow written as weighted root-to-sink paths plus weighted cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDecomposition<T> {
    pub sink: Vertex,
    pub paths: Vec<WeightedEdges<T>>,
    pub cycles: Vec<WeightedEdges<T>>,
}

impl<T: Scalar> PathDecomposition<T> {
    /// Sum of the weighted characteristic vectors.
    pub fn recompose(&self) -> CapacityVector<T> {
        let mut out = CapacityVector::zero();
        for walk in self.paths.iter().chain(&self.cycles) {
            for &id in &walk.edges {
                out.add(id, walk.weight.clone())
                    .expect("weights are positive");
            }
        }
        out
    }

    pub fn path_total(&self) -> T {
        self.paths
            .iter()
            .fold(T::zero(), |acc, p| acc + p.weight.clone())
    }
}

/// Greedy peeling: trace a path from the root (or a cycle met on the way)
/// through the positive support and subtract its bottleneck; once nothing
/// leaves the root, peel the remaining circulation into cycles.
pub fn decompose<T: Scalar>(d: &RootedDigraph, x: &Flow<T>) -> Result<PathDecomposition<T>> {
    let x = Flow::from_values(d, x.sink, x.values.clone())?;
    let edges: &[Edge] = d.edges();
    let mut rest: Vec<T> = edges.iter().map(|e| x.values.get(e.id)).collect();
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); d.vertex_count()];
    for (i, e) in edges.iter().enumerate() {
        out_of[e.tail.0].push(i);
    }
    let positive_out = |rest: &[T], u: usize| -> Option<usize> {
        out_of[u].iter().copied().find(|&i| rest[i] > T::zero())
    };

    let mut paths = Vec::new();
    let mut cycles = Vec::new();

    let peel = |rest: &mut [T], walk: &[usize]| -> T {
        let weight = walk
            .iter()
            .map(|&i| rest[i].clone())
            .reduce(min_of)
            .expect("walks are nonempty");
        for &i in walk {
            rest[i] = rest[i].clone() - weight.clone();
        }
        weight
    };
    let as_ids = |walk: &[usize]| walk.iter().map(|&i| edges[i].id).collect::<Vec<_>>();

    let root = d.root().0;
    let sink = x.sink.0;
    while positive_out(&rest, root).is_some() {
        let mut walk: Vec<usize> = Vec::new();
        let mut position = BTreeMap::from([(root, 0usize)]);
        let mut u = root;
        while u != sink {
            let i = positive_out(&rest, u).ok_or(Error::ConservationViolated(Vertex(u)))?;
            walk.push(i);
            u = edges[i].head.0;
            if let Some(&start) = position.get(&u) {
                let cycle = walk[start..].to_vec();
                let weight = peel(&mut rest, &cycle);
                cycles.push(WeightedEdges {
                    edges: as_ids(&cycle),
                    weight,
                });
                walk.clear();
                break;
            }
            position.insert(u, walk.len());
        }
        if u == sink && !walk.is_empty() {
            let weight = peel(&mut rest, &walk);
            paths.push(WeightedEdges {
                edges: as_ids(&walk),
                weight,
            });
        }
    }

    while let Some(cycle) = find_cycle(d, |i| rest[i] > T::zero()) {
        let weight = peel(&mut rest, &cycle);
        cycles.push(WeightedEdges {
            edges: as_ids(&cycle),
            weight,
        });
    }
    if let Some(i) = rest.iter().position(|r| *r > T::zero()) {
        return Err(Error::ConservationViolated(edges[i].tail));
    }

    Ok(PathDecomposition {
        sink: x.sink,
        paths,
        cycles,
    })
}
