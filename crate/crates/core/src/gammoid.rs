//! Independence in the gammoid on the in-edges of a vertex, and membership
//! in its capacitated analogue.
//!
//! A set `I` of edges entering `v` is independent when some family of
//! pairwise edge-disjoint root-to-`v` paths has exactly `I` as its set of
//! last edges. Every check here reduces to one or two maximum flows.

use std::collections::BTreeSet;

use crate::digraph::{CapacityVector, EdgeId, RootedDigraph, Vertex};
use crate::error::{Error, Result};
use crate::flow::lambda;
use crate::scalar::Scalar;

/// A subset of the edges entering one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InEdgeSubset {
    vertex: Vertex,
    edges: BTreeSet<EdgeId>,
}

impl InEdgeSubset {
    pub fn new(d: &RootedDigraph, vertex: Vertex, edges: BTreeSet<EdgeId>) -> Result<Self> {
        d.check_vertex(vertex)?;
        for &id in &edges {
            check_in_edge(d, vertex, id)?;
        }
        Ok(Self { vertex, edges })
    }

    pub fn empty(vertex: Vertex) -> Self {
        Self {
            vertex,
            edges: BTreeSet::new(),
        }
    }

    pub fn vertex(&self) -> Vertex {
        self.vertex
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }
}

/// Nonnegative values on the edges entering one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct InEdgeVector<T> {
    vertex: Vertex,
    values: CapacityVector<T>,
}

impl<T: Scalar> InEdgeVector<T> {
    pub fn new(d: &RootedDigraph, vertex: Vertex, values: CapacityVector<T>) -> Result<Self> {
        d.check_vertex(vertex)?;
        for (id, _) in values.iter() {
            check_in_edge(d, vertex, id)?;
        }
        Ok(Self { vertex, values })
    }

    pub fn vertex(&self) -> Vertex {
        self.vertex
    }

    pub fn values(&self) -> &CapacityVector<T> {
        &self.values
    }
}

fn check_in_edge(d: &RootedDigraph, vertex: Vertex, id: EdgeId) -> Result<()> {
    let edge = d.edge(id).ok_or(Error::UnknownEdge(id))?;
    if edge.head != vertex {
        return Err(Error::NotAnInEdge { edge: id, vertex });
    }
    Ok(())
}

fn non_root(d: &RootedDigraph, v: Vertex) -> Result<()> {
    d.check_vertex(v)?;
    if v == d.root() {
        Err(Error::SinkIsRoot)
    } else {
        Ok(())
    }
}

/// Unit-capacity connectivity, the edge-disjoint path count.
pub(crate) fn unit_lambda(d: &RootedDigraph, v: Vertex) -> Result<i64> {
    lambda(d, &CapacityVector::<i64>::unit(d), v)
}

/// Whether `subset` is independent in the gammoid at its vertex. Deleting
/// the other in-edges of `v` leaves connectivity `|I|` exactly when the
/// paths can be routed to end in `I`.
pub fn is_independent(d: &RootedDigraph, subset: &InEdgeSubset) -> Result<bool> {
    let v = subset.vertex;
    non_root(d, v)?;
    for &id in &subset.edges {
        check_in_edge(d, v, id)?;
    }
    let keep: BTreeSet<EdgeId> = d
        .edges()
        .iter()
        .filter(|e| e.head != v || subset.edges.contains(&e.id))
        .map(|e| e.id)
        .collect();
    let reduced = d.restrict(&keep);
    Ok(unit_lambda(&reduced, v)? == subset.edges.len() as i64)
}

/// Whether `edge` lies in every basis of the gammoid at its head, tested as
/// a rank drop on deletion.
pub fn is_coloop(d: &RootedDigraph, v: Vertex, edge: EdgeId) -> Result<bool> {
    non_root(d, v)?;
    check_in_edge(d, v, edge)?;
    let with = unit_lambda(d, v)?;
    let without = unit_lambda(&d.without_edge(edge), v)?;
    Ok(without == with - 1)
}

/// Whether some flow bounded by `c` restricts to `s` on the in-edges of its
/// vertex. Capping those edges at `s` forces any flow of amount `sum(s)`
/// to saturate each of them exactly.
pub fn polygammoid_member<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    s: &InEdgeVector<T>,
) -> Result<bool> {
    let v = s.vertex;
    non_root(d, v)?;
    if s.values.first_exceeding(c).is_some() {
        return Ok(false);
    }
    let capped = with_in_edges(d, c, v, &s.values)?;
    Ok(lambda(d, &capped, v)? == s.values.total())
}

/// Rank of `edges` in the capacitated gammoid at `v`: the connectivity left
/// after zeroing the other in-edges of `v`.
pub fn polygammoid_rank<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    v: Vertex,
    edges: &BTreeSet<EdgeId>,
) -> Result<T> {
    non_root(d, v)?;
    let mut reduced = c.clone();
    for e in d.in_edges(v) {
        if !edges.contains(&e.id) {
            reduced.set(e.id, T::zero())?;
        }
    }
    lambda(d, &reduced, v)
}

/// `c` with the in-edges of `v` overwritten by `values`.
pub(crate) fn with_in_edges<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    v: Vertex,
    values: &CapacityVector<T>,
) -> Result<CapacityVector<T>> {
    let mut out = c.clone();
    for e in d.in_edges(v) {
        out.set(e.id, values.get(e.id))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Rational;

    fn ids(list: &[usize]) -> BTreeSet<EdgeId> {
        list.iter().map(|&i| EdgeId(i)).collect()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d).unwrap()
    }

    #[test]
    fn independence_in_fx2() {
        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        // e2 = a->v and e5 = r->v
        let i = InEdgeSubset::new(&d, v, ids(&[1, 4])).unwrap();
        assert!(is_independent(&d, &i).unwrap());
        // e2 and e4 = b->v both need r->a
        let i = InEdgeSubset::new(&d, v, ids(&[1, 3])).unwrap();
        assert!(!is_independent(&d, &i).unwrap());
        assert!(is_independent(&d, &InEdgeSubset::empty(v)).unwrap());
    }

    #[test]
    fn subset_must_enter_vertex() {
        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        assert!(matches!(
            InEdgeSubset::new(&d, v, ids(&[0])),
            Err(Error::NotAnInEdge { .. })
        ));
    }

    #[test]
    fn coloops() {
        let (d, _) = fixtures::fx3();
        assert!(is_coloop(&d, d.vertex("v").unwrap(), EdgeId(1)).unwrap());

        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        assert!(!is_coloop(&d, v, EdgeId(1)).unwrap());
        assert!(is_coloop(&d, v, EdgeId(4)).unwrap());
        assert!(matches!(
            is_coloop(&d, v, EdgeId(0)),
            Err(Error::NotAnInEdge { .. })
        ));
    }

    #[test]
    fn polygammoid_membership_in_fx5() {
        let (d, c) = fixtures::fx5();
        let v = d.vertex("v").unwrap();
        let member = |pairs: Vec<(usize, Rational)>| {
            let values =
                CapacityVector::from_pairs(pairs.into_iter().map(|(i, x)| (EdgeId(i), x))).unwrap();
            polygammoid_member(&d, &c, &InEdgeVector::new(&d, v, values).unwrap()).unwrap()
        };
        assert!(member(vec![(1, q(1, 2)), (2, q(1, 3))]));
        assert!(!member(vec![(1, q(1, 1)), (2, q(0, 1))]));
        assert!(member(vec![]));
        // above capacity on e3
        assert!(!member(vec![(2, q(1, 2))]));
    }

    #[test]
    fn polygammoid_rank_of_fx5() {
        let (d, c) = fixtures::fx5();
        let v = d.vertex("v").unwrap();
        assert_eq!(polygammoid_rank(&d, &c, v, &ids(&[1])).unwrap(), q(1, 2));
        assert_eq!(polygammoid_rank(&d, &c, v, &ids(&[1, 2])).unwrap(), q(5, 6));
        assert_eq!(polygammoid_rank(&d, &c, v, &ids(&[])).unwrap(), q(0, 1));
    }
}
