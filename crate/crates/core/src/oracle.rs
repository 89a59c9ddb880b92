//! Brute-force references and random instances.
//!
//! Nothing here calls into the flow engine: connectivities come from
//! enumerating every cut, independence from enumerating path systems. The
//! functions are exponential and refuse inputs above [`OracleBounds`].

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{CapacityVector, Edge, EdgeId, RootedDigraph, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::scalar::{min_of, Scalar};
use crate::text;
use crate::Rational;

/// Size limits for the exponential routines. Each field can be overridden
/// through the environment variable named next to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    /// `FLAME_ORACLE_MAX_VERTICES`, cut enumeration.
    pub max_vertices: usize,
    /// `FLAME_ORACLE_MAX_PATH_EDGES`, path-system search.
    pub max_path_edges: usize,
    /// `FLAME_ORACLE_MAX_SUBSET_EDGES`, edge-subset enumeration.
    pub max_subset_edges: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self {
            max_vertices: 16,
            max_path_edges: 14,
            max_subset_edges: 12,
        }
    }
}

impl OracleBounds {
    /// Defaults with environment overrides applied.
    pub fn current() -> Self {
        let read = |name: &str, fallback: usize| {
            std::env::var(name)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(fallback)
        };
        let base = Self::default();
        Self {
            max_vertices: read("FLAME_ORACLE_MAX_VERTICES", base.max_vertices),
            max_path_edges: read("FLAME_ORACLE_MAX_PATH_EDGES", base.max_path_edges),
            max_subset_edges: read("FLAME_ORACLE_MAX_SUBSET_EDGES", base.max_subset_edges),
        }
    }
}

fn bound(what: &'static str, limit: usize, actual: usize) -> Result<()> {
    if actual > limit {
        Err(Error::SizeBound {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}

fn non_root(d: &RootedDigraph, v: Vertex) -> Result<()> {
    if !d.contains(v) {
        return Err(Error::VertexOutOfRange(v));
    }
    if v == d.root() {
        return Err(Error::SinkIsRoot);
    }
    Ok(())
}

/// In-capacity of the set marked in `inside`, by a direct scan.
fn cut_value<T: Scalar>(d: &RootedDigraph, c: &CapacityVector<T>, inside: &[bool]) -> T {
    let mut total = T::zero();
    for e in d.edges() {
        if inside[e.head.0] && !inside[e.tail.0] {
            total = total + c.get(e.id);
        }
    }
    total
}

/// Calls `visit` with every `W` such that `v ∈ W ⊆ V - r`, as a membership
/// mask over vertex indices.
fn for_each_cut(d: &RootedDigraph, v: Vertex, mut visit: impl FnMut(&[bool])) {
    let free: Vec<usize> = d
        .vertices()
        .filter(|&u| u != v && u != d.root())
        .map(|u| u.0)
        .collect();
    let mut inside = vec![false; d.vertex_count()];
    for mask in 0u64..(1u64 << free.len()) {
        inside.fill(false);
        inside[v.0] = true;
        for (bit, &u) in free.iter().enumerate() {
            inside[u] = mask >> bit & 1 == 1;
        }
        visit(&inside);
    }
}

/// Minimum in-capacity over all sets containing `v` and avoiding the root.
pub fn brute_lambda<T: Scalar>(d: &RootedDigraph, c: &CapacityVector<T>, v: Vertex) -> Result<T> {
    bound(
        "cut enumeration vertices",
        OracleBounds::current().max_vertices,
        d.vertex_count(),
    )?;
    non_root(d, v)?;
    let mut best: Option<T> = None;
    for_each_cut(d, v, |inside| {
        let value = cut_value(d, c, inside);
        best = Some(match best.take() {
            Some(b) => min_of(b, value),
            None => value,
        });
    });
    Ok(best.expect("at least the singleton cut"))
}

/// All minimizers of the in-capacity among sets containing `v` and avoiding
/// the root, with the minimum value.
pub fn brute_tight_sets<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    v: Vertex,
) -> Result<(T, Vec<VertexSet>)> {
    let value = brute_lambda(d, c, v)?;
    let mut sets = Vec::new();
    for_each_cut(d, v, |inside| {
        if cut_value(d, c, inside) == value {
            sets.push(
                inside
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| Vertex(i))
                    .collect(),
            );
        }
    });
    Ok((value, sets))
}

/// The minimizer with the most vertices.
pub fn brute_maximal_tight_set<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    v: Vertex,
) -> Result<(T, VertexSet)> {
    let (value, sets) = brute_tight_sets(d, c, v)?;
    let largest = sets
        .into_iter()
        .max_by_key(|s| s.len())
        .expect("a minimizer exists");
    Ok((value, largest))
}

/// `min { rho(W) - rho(U) : U ⊊ W ⊆ V - r }`, or `None` when `U = V - r`.
pub fn brute_superset_gap<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    set: &VertexSet,
) -> Result<Option<T>> {
    bound(
        "cut enumeration vertices",
        OracleBounds::current().max_vertices,
        d.vertex_count(),
    )?;
    let mut base_mask = vec![false; d.vertex_count()];
    for v in set {
        base_mask[v.0] = true;
    }
    let base = cut_value(d, c, &base_mask);
    let free: Vec<usize> = d
        .vertices()
        .filter(|&u| u != d.root() && !set.contains(&u))
        .map(|u| u.0)
        .collect();
    let mut best: Option<T> = None;
    for mask in 1u64..(1u64 << free.len()) {
        let mut inside = base_mask.clone();
        for (bit, &u) in free.iter().enumerate() {
            inside[u] = mask >> bit & 1 == 1;
        }
        let gap = cut_value(d, c, &inside) - base.clone();
        best = Some(match best.take() {
            Some(b) => min_of(b, gap),
            None => gap,
        });
    }
    Ok(best)
}

/// Whether edge-disjoint root-to-`v` paths exist whose last edges are
/// exactly `edges`, by exhaustive backtracking over simple paths.
pub fn brute_independent(d: &RootedDigraph, v: Vertex, edges: &BTreeSet<EdgeId>) -> Result<bool> {
    bound(
        "path search edges",
        OracleBounds::current().max_path_edges,
        d.edge_count(),
    )?;
    non_root(d, v)?;
    let targets: Vec<Edge> = edges
        .iter()
        .map(|&id| {
            let e = *d.edge(id).ok_or(Error::UnknownEdge(id))?;
            if e.head != v {
                return Err(Error::NotAnInEdge {
                    edge: id,
                    vertex: v,
                });
            }
            Ok(e)
        })
        .collect::<Result<_>>()?;
    let mut used = BTreeSet::new();
    Ok(route_all(d, v, &targets, &mut used))
}

fn route_all(d: &RootedDigraph, v: Vertex, targets: &[Edge], used: &mut BTreeSet<EdgeId>) -> bool {
    let Some((last, rest)) = targets.split_first() else {
        return true;
    };
    used.insert(last.id);
    let mut on_path = vec![false; d.vertex_count()];
    on_path[d.root().0] = true;
    let found = extend(d, v, d.root(), last.tail, &mut on_path, used, &mut |used| {
        route_all(d, v, rest, used)
    });
    used.remove(&last.id);
    found
}

/// Depth-first enumeration of simple paths from `at` to `goal` that avoid
/// `v` and used edges; `done` is tried on every completed path.
fn extend(
    d: &RootedDigraph,
    v: Vertex,
    at: Vertex,
    goal: Vertex,
    on_path: &mut Vec<bool>,
    used: &mut BTreeSet<EdgeId>,
    done: &mut dyn FnMut(&mut BTreeSet<EdgeId>) -> bool,
) -> bool {
    if at == goal {
        return done(used);
    }
    for e in d.edges() {
        if e.tail != at || e.head == v || on_path[e.head.0] || used.contains(&e.id) {
            continue;
        }
        used.insert(e.id);
        on_path[e.head.0] = true;
        let found = extend(d, v, e.head, goal, on_path, used, done);
        on_path[e.head.0] = false;
        used.remove(&e.id);
        if found {
            return true;
        }
    }
    false
}

/// Coloop test by enumerating all independent sets avoiding `edge`.
pub fn brute_is_coloop(d: &RootedDigraph, v: Vertex, edge: EdgeId) -> Result<bool> {
    let others: Vec<EdgeId> = d
        .in_edges(v)
        .map(|e| e.id)
        .filter(|&id| id != edge)
        .collect();
    if d.edge(edge).map(|e| e.head) != Some(v) {
        return Err(Error::NotAnInEdge { edge, vertex: v });
    }
    for mask in 0u64..(1u64 << others.len()) {
        let set: BTreeSet<EdgeId> = others
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &id)| id)
            .collect();
        if brute_independent(d, v, &set)? {
            let mut grown = set;
            grown.insert(edge);
            if !brute_independent(d, v, &grown)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// In-capacity of a single vertex, by a direct scan.
fn in_sum<T: Scalar>(d: &RootedDigraph, c: &CapacityVector<T>, v: Vertex) -> T {
    d.edges()
        .iter()
        .filter(|e| e.head == v)
        .fold(T::zero(), |acc, e| acc + c.get(e.id))
}

/// Flame predicate with connectivities from cut enumeration.
pub fn brute_is_flame<T: Scalar>(d: &RootedDigraph, f: &CapacityVector<T>) -> Result<bool> {
    for v in d.non_root() {
        if brute_lambda(d, f, v)? != in_sum(d, f, v) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subset(d: &RootedDigraph, mask: u64) -> BTreeSet<EdgeId> {
    d.edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e.id)
        .collect()
}

/// Every edge subset of the multigraph `d` that spans a flame.
pub fn enumerate_flames(d: &RootedDigraph) -> Result<Vec<BTreeSet<EdgeId>>> {
    let m = d.edge_count();
    bound(
        "subset enumeration edges",
        OracleBounds::current().max_subset_edges,
        m,
    )?;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let keep = subset(d, mask);
        let h = d.restrict(&keep);
        if brute_is_flame(&h, &CapacityVector::<i64>::unit(&h))? {
            out.push(keep);
        }
    }
    Ok(out)
}

/// Fewest edges of a spanning subgraph of the multigraph `d` that keeps
/// every root-to-vertex edge-connectivity.
pub fn brute_min_preserving_size(d: &RootedDigraph) -> Result<usize> {
    let m = d.edge_count();
    bound(
        "subset enumeration edges",
        OracleBounds::current().max_subset_edges,
        m,
    )?;
    let unit = CapacityVector::<i64>::unit(d);
    let target: Vec<i64> = d
        .non_root()
        .map(|v| brute_lambda(d, &unit, v))
        .collect::<Result<_>>()?;
    let mut masks: Vec<u64> = (0..(1u64 << m)).collect();
    masks.sort_by_key(|mask| mask.count_ones());
    for mask in masks {
        let keep = subset(d, mask);
        let c = CapacityVector::<i64>::indicator(&keep);
        let mut preserves = true;
        for (v, want) in d.non_root().zip(&target) {
            if brute_lambda(d, &c, v)? != *want {
                preserves = false;
                break;
            }
        }
        if preserves {
            return Ok(mask.count_ones() as usize);
        }
    }
    unreachable!("the full edge set preserves every connectivity")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMode {
    /// Every capacity is one.
    Unit,
    /// Integers drawn uniformly from `1..=max`.
    Integral { max: u32 },
    /// `p/q` with `1 <= q <= max_denominator` and `0 <= p <= 2q`.
    Rational { max_denominator: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub vertices: usize,
    pub edges: usize,
    pub capacity: CapacityMode,
    pub seed: u64,
}

/// Names used for generated vertices: `r`, then `v1`, `v2`, ...
fn generated_name(i: usize) -> String {
    if i == 0 {
        "r".to_string()
    } else {
        format!("v{i}")
    }
}

/// Seeded random rooted multigraph. Arcs are drawn independently and
/// uniformly among ordered pairs with distinct ends whose head is not the
/// root, so parallel arcs may occur.
pub fn gen_instance(spec: &InstanceSpec) -> (RootedDigraph, CapacityVector<Rational>) {
    let n = spec.vertices.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names: Vec<String> = (0..n).map(generated_name).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|t| (1..n).map(move |h| (t, h)))
        .filter(|(t, h)| t != h)
        .collect();
    let mut edges = Vec::new();
    let mut c = CapacityVector::zero();
    if !pairs.is_empty() {
        for i in 0..spec.edges {
            let &(t, h) = pairs.choose(&mut rng).expect("nonempty");
            let id = EdgeId(i);
            edges.push(Edge {
                id,
                tail: Vertex(t),
                head: Vertex(h),
            });
            let value = match spec.capacity {
                CapacityMode::Unit => Rational::from_integer(1.into()),
                CapacityMode::Integral { max } => {
                    Rational::from_integer(rng.gen_range(1..=max.max(1)).into())
                }
                CapacityMode::Rational { max_denominator } => {
                    let q = rng.gen_range(1..=max_denominator.max(1)) as i64;
                    let p = rng.gen_range(0..=2 * q);
                    Rational::new(p.into(), q.into())
                }
            };
            c.set(id, value).expect("nonnegative");
        }
    }
    let d = RootedDigraph::new(names, Vertex(0), edges).expect("generated graph is loop-free");
    (d, c)
}

/// A generated instance in the text format.
pub fn gen_instance_text(spec: &InstanceSpec) -> String {
    let (d, c) = gen_instance(spec);
    text::write(&d, &c)
}

/// A seeded random permutation of the non-root vertices.
pub fn random_order(d: &RootedDigraph, seed: u64) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = d.non_root().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn ids(list: &[usize]) -> BTreeSet<EdgeId> {
        list.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn cut_enumeration_values() {
        let (d, c) = fixtures::fx1();
        assert_eq!(
            brute_lambda(&d, &c, d.vertex("v").unwrap()).unwrap(),
            q(2, 1)
        );
        let (d, c) = fixtures::fx5();
        assert_eq!(
            brute_lambda(&d, &c, d.vertex("v").unwrap()).unwrap(),
            q(5, 6)
        );
        let d = RootedDigraph::from_arcs("r", &[("r", "a"), ("b", "a")]).unwrap();
        let c = CapacityVector::<Rational>::unit(&d);
        assert_eq!(
            brute_lambda(&d, &c, d.vertex("b").unwrap()).unwrap(),
            q(0, 1)
        );
    }

    #[test]
    fn fx2_lambdas_and_tight_sets() {
        let (d, c) = fixtures::fx2();
        let table: Vec<_> = d
            .non_root()
            .map(|v| (d.name(v), brute_lambda(&d, &c, v).unwrap()))
            .collect();
        assert_eq!(table, vec![("a", q(1, 1)), ("v", q(2, 1)), ("b", q(1, 1))]);
        let (value, sets) = brute_tight_sets(&d, &c, d.vertex("v").unwrap()).unwrap();
        assert_eq!(value, q(2, 1));
        let abv: VertexSet = ["a", "b", "v"]
            .iter()
            .map(|n| d.vertex(n).unwrap())
            .collect();
        assert_eq!(sets, vec![abv]);
    }

    #[test]
    fn fx6_tight_sets_under_reference() {
        let (d, _) = fixtures::fx6();
        let y = fixtures::fx6_reference();
        let u = d.vertex("u").unwrap();
        let (value, sets) = brute_tight_sets(&d, &y, u).unwrap();
        assert_eq!(value, q(1, 1));
        assert_eq!(sets.len(), 2);
        let (_, largest) = brute_maximal_tight_set(&d, &y, u).unwrap();
        assert_eq!(largest.len(), 2);
        assert_eq!(brute_superset_gap(&d, &y, &largest).unwrap(), None);
    }

    #[test]
    fn path_systems_in_fx2() {
        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        assert!(brute_independent(&d, v, &ids(&[1, 4])).unwrap());
        assert!(!brute_independent(&d, v, &ids(&[1, 3])).unwrap());
        assert!(brute_independent(&d, v, &ids(&[])).unwrap());
        assert!(brute_independent(&d, v, &ids(&[3, 4])).unwrap());
    }

    #[test]
    fn coloops_by_enumeration() {
        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        assert!(!brute_is_coloop(&d, v, EdgeId(1)).unwrap());
        assert!(brute_is_coloop(&d, v, EdgeId(4)).unwrap());
        let (d, _) = fixtures::fx3();
        assert!(brute_is_coloop(&d, d.vertex("v").unwrap(), EdgeId(1)).unwrap());
    }

    #[test]
    fn flame_enumeration() {
        let (d, _) = fixtures::fx3();
        assert_eq!(
            enumerate_flames(&d).unwrap(),
            vec![ids(&[]), ids(&[0]), ids(&[0, 1])]
        );
        let (d, _) = fixtures::fx4();
        assert_eq!(enumerate_flames(&d).unwrap().len(), 4);
        let (d, _) = fixtures::fx1();
        let flames = enumerate_flames(&d).unwrap();
        assert!(flames.contains(&ids(&[0, 1, 2, 3])));
        assert!(!flames.contains(&ids(&[2])));
    }

    #[test]
    fn fx2_minimum_preserving_size() {
        let (d, _) = fixtures::fx2();
        assert_eq!(brute_min_preserving_size(&d).unwrap(), 4);
    }

    #[test]
    fn bounds_are_enforced() {
        let spec = InstanceSpec {
            vertices: 4,
            edges: 13,
            capacity: CapacityMode::Unit,
            seed: 3,
        };
        let (d, _) = gen_instance(&spec);
        assert!(matches!(enumerate_flames(&d), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = InstanceSpec {
            vertices: 4,
            edges: 6,
            capacity: CapacityMode::Unit,
            seed: 7,
        };
        assert_eq!(gen_instance(&spec), gen_instance(&spec));
        assert_eq!(gen_instance_text(&spec), gen_instance_text(&spec));
    }

    #[test]
    fn two_vertex_instance_is_forced() {
        for seed in 0..5 {
            let (d, _) = gen_instance(&InstanceSpec {
                vertices: 2,
                edges: 1,
                capacity: CapacityMode::Unit,
                seed,
            });
            assert_eq!(d.edge_count(), 1);
            let e = d.edges()[0];
            assert_eq!((e.tail, e.head), (d.root(), Vertex(1)));
        }
    }

    #[test]
    fn rational_denominators_are_bounded() {
        let (_, c) = gen_instance(&InstanceSpec {
            vertices: 5,
            edges: 10,
            capacity: CapacityMode::Rational {
                max_denominator: 10,
            },
            seed: 1,
        });
        for (_, value) in c.iter() {
            assert!(*value.denom() <= 10.into());
        }
    }
}
