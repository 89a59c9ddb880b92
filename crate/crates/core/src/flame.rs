//! Flames: capacity vectors whose in-capacity equals the connectivity at
//! every non-root vertex.
//!
//! [`extract_flame`] visits the non-root vertices in a given order. At each
//! vertex it computes a maximum flow under the current vector and
//! overwrites the in-edges of that vertex with the flow values. No step
//! lowers any vertex's connectivity, and once a vertex has been visited its
//! in-capacity equals its connectivity for good.

use std::collections::BTreeMap;

use crate::digraph::{CapacityVector, EdgeId, RootedDigraph, Vertex};
use crate::error::{Error, Result};
use crate::flow::{lambda_all, max_flow};
use crate::gammoid::with_in_edges;
use crate::scalar::{convert, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRow<T> {
    pub vertex: Vertex,
    /// Connectivity under the reference capacity.
    pub lambda_c: T,
    /// Connectivity under the candidate vector.
    pub lambda_f: T,
    /// In-capacity of the vertex under the candidate vector.
    pub rho_f: T,
}

/// Per-vertex comparison of a candidate `f` against a capacity `c`.
/// The flags are derived from the rows on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FlameReport<T> {
    pub rows: Vec<VertexRow<T>>,
    /// `lambda_f == rho_f` everywhere.
    pub is_flame: bool,
    /// `lambda_f == lambda_c` everywhere.
    pub preserves: bool,
    /// `f <= c` edgewise.
    pub bounded: bool,
    pub integral: bool,
}

impl<T: Scalar> FlameReport<T> {
    pub fn new(rows: Vec<VertexRow<T>>, bounded: bool, integral: bool) -> Self {
        let is_flame = rows.iter().all(|r| r.lambda_f == r.rho_f);
        let preserves = rows.iter().all(|r| r.lambda_f == r.lambda_c);
        Self {
            rows,
            is_flame,
            preserves,
            bounded,
            integral,
        }
    }

    /// `f <= c`, flame and connectivity-preserving.
    pub fn holds(&self) -> bool {
        self.is_flame && self.preserves && self.bounded
    }

    pub fn row(&self, v: Vertex) -> Option<&VertexRow<T>> {
        self.rows.iter().find(|r| r.vertex == v)
    }

    /// First vertex where in-capacity exceeds connectivity.
    pub fn first_violation(&self) -> Option<Vertex> {
        self.rows
            .iter()
            .find(|r| r.lambda_f != r.rho_f)
            .map(|r| r.vertex)
    }
}

/// Recomputes every connectivity from scratch and compares `f` with `c`.
pub fn verify<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    f: &CapacityVector<T>,
) -> FlameReport<T> {
    let lambda_c = lambda_all(d, c);
    let lambda_f = lambda_all(d, f);
    let rows = d
        .non_root()
        .map(|v| VertexRow {
            vertex: v,
            lambda_c: lambda_c[&v].clone(),
            lambda_f: lambda_f[&v].clone(),
            rho_f: d.in_degree(f, v),
        })
        .collect();
    FlameReport::new(rows, f.le(c), f.is_integral())
}

/// Flame test for `f` on its own; the report compares `f` with itself.
pub fn is_flame<T: Scalar>(d: &RootedDigraph, f: &CapacityVector<T>) -> (bool, FlameReport<T>) {
    let report = verify(d, f, f);
    (report.is_flame, report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityChange<T> {
    pub edge: EdgeId,
    pub before: T,
    pub after: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionStep<T> {
    pub sink: Vertex,
    pub amount: T,
    pub changes: Vec<CapacityChange<T>>,
}

/// What each extraction step did, enough to rebuild every intermediate
/// vector from the starting capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionTrace<T> {
    pub order: Vec<Vertex>,
    pub steps: Vec<ExtractionStep<T>>,
}

impl<T: Scalar> ExtractionTrace<T> {
    /// `f_0 = c, f_1, ..., f_n`.
    pub fn snapshots(&self, c: &CapacityVector<T>) -> Vec<CapacityVector<T>> {
        let mut current = c.clone();
        let mut out = vec![current.clone()];
        for step in &self.steps {
            for change in &step.changes {
                current
                    .set(change.edge, change.after.clone())
                    .expect("recorded values are nonnegative");
            }
            out.push(current.clone());
        }
        out
    }
}

/// Non-root vertices in ascending index order.
pub fn default_order(d: &RootedDigraph) -> Vec<Vertex> {
    d.non_root().collect()
}

/// Lowers `c` to a flame with the same connectivities, one vertex at a time
/// in `order`.
pub fn extract_flame<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    order: &[Vertex],
) -> Result<(CapacityVector<T>, ExtractionTrace<T>)> {
    d.check_order(order)?;
    let mut f = c.clone();
    let mut steps = Vec::with_capacity(order.len());
    for &v in order {
        let z = max_flow(d, &f, v)?;
        let changes = d
            .in_edges(v)
            .filter_map(|e| {
                let before = f.get(e.id);
                let after = z.value(e.id);
                (before != after).then(|| CapacityChange {
                    edge: e.id,
                    before,
                    after,
                })
            })
            .collect();
        f = with_in_edges(d, &f, v, z.values())?;
        steps.push(ExtractionStep {
            sink: v,
            amount: z.amount().clone(),
            changes,
        });
    }
    Ok((
        f,
        ExtractionTrace {
            order: order.to_vec(),
            steps,
        },
    ))
}

/// Integral extraction, listing the kept edges as a multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralFlame<T> {
    pub capacities: CapacityVector<T>,
    /// Each edge id repeated as often as its kept multiplicity.
    pub edges: Vec<EdgeId>,
    pub trace: ExtractionTrace<T>,
    pub report: FlameReport<T>,
}

/// Extraction restricted to integral capacities. For unit capacities the
/// result is a spanning subgraph with exactly `sum_v lambda(v)` edges.
pub fn extract_flame_integral<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    order: &[Vertex],
) -> Result<IntegralFlame<T>> {
    if let Some(id) = c.first_fractional() {
        return Err(Error::NonIntegral(id));
    }
    let (f, trace) = extract_flame(d, c, order)?;
    let mut edges = Vec::new();
    for (id, value) in f.iter() {
        let count: i64 = convert(value).ok_or(Error::NonIntegral(id))?;
        edges.extend(std::iter::repeat_n(id, count as usize));
    }
    let report = verify(d, c, &f);
    Ok(IntegralFlame {
        capacities: f,
        edges,
        trace,
        report,
    })
}

/// Replaces the in-edges of `v` by the values of one maximum flow to `v`.
/// No vertex loses connectivity.
pub fn trim_unused<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    v: Vertex,
) -> Result<CapacityVector<T>> {
    let z = max_flow(d, c, v)?;
    with_in_edges(d, c, v, z.values())
}

/// Connectivity table for every intermediate vector of a trace.
pub fn trace_lambdas<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    trace: &ExtractionTrace<T>,
) -> Vec<BTreeMap<Vertex, T>> {
    trace
        .snapshots(c)
        .iter()
        .map(|f| lambda_all(d, f))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Rational;
    use std::collections::BTreeSet;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d).unwrap()
    }

    fn order(d: &RootedDigraph, names: &[&str]) -> Vec<Vertex> {
        names.iter().map(|n| d.vertex(n).unwrap()).collect()
    }

    #[test]
    fn flame_predicate_on_fixtures() {
        let (d, c) = fixtures::fx1();
        assert!(is_flame(&d, &c).0);

        let (d, c) = fixtures::fx2();
        let (ok, report) = is_flame(&d, &c);
        assert!(!ok);
        let row = report.row(d.vertex("v").unwrap()).unwrap();
        assert_eq!(
            (row.lambda_f.clone(), row.rho_f.clone()),
            (q(2, 1), q(3, 1))
        );

        let d = RootedDigraph::from_arcs("r", &[]).unwrap();
        assert!(is_flame(&d, &CapacityVector::<Rational>::zero()).0);
    }

    #[test]
    fn extraction_on_fx2() {
        let (d, c) = fixtures::fx2();
        let (f, trace) = extract_flame(&d, &c, &order(&d, &["a", "b", "v"])).unwrap();
        let support: BTreeSet<usize> = f.support().iter().map(|e| e.0).collect();
        let a = BTreeSet::from([0, 1, 2, 4]);
        let b = BTreeSet::from([0, 2, 3, 4]);
        assert!(support == a || support == b, "{support:?}");
        assert!(verify(&d, &c, &f).holds());
        assert_eq!(trace.steps.len(), 3);
    }

    #[test]
    fn extraction_keeps_a_flame() {
        let (d, c) = fixtures::fx1();
        for names in [["a", "b", "v"], ["v", "b", "a"], ["b", "v", "a"]] {
            let (f, _) = extract_flame(&d, &c, &order(&d, &names)).unwrap();
            assert_eq!(f, c);
        }
    }

    #[test]
    fn extraction_on_fx5() {
        let (d, c) = fixtures::fx5();
        let (f, trace) = extract_flame(&d, &c, &order(&d, &["a", "v"])).unwrap();
        assert_eq!(f.get(EdgeId(0)), q(1, 2));
        assert_eq!(f.get(EdgeId(1)), q(1, 2));
        assert_eq!(f.get(EdgeId(2)), q(1, 3));
        assert_eq!(d.in_degree(&f, d.vertex("v").unwrap()), q(5, 6));
        assert_eq!(
            trace.steps[1].changes,
            vec![CapacityChange {
                edge: EdgeId(1),
                before: q(1, 1),
                after: q(1, 2)
            }]
        );
        assert_eq!(trace.snapshots(&c).last(), Some(&f));
    }

    #[test]
    fn order_must_be_permutation() {
        let (d, c) = fixtures::fx2();
        assert!(matches!(
            extract_flame(&d, &c, &order(&d, &["a", "v"])),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn integral_extraction() {
        let (d, c) = fixtures::fx2();
        let out = extract_flame_integral(&d, &c, &default_order(&d)).unwrap();
        assert_eq!(out.edges.len(), 4);
        assert!(out.report.holds());

        let (d, c) = fixtures::fx4();
        let out = extract_flame_integral(&d, &c, &default_order(&d)).unwrap();
        assert_eq!(out.edges, vec![EdgeId(0), EdgeId(1)]);

        let (d, c) = fixtures::fx3();
        let out = extract_flame_integral(&d, &c, &default_order(&d)).unwrap();
        assert_eq!(out.edges, vec![EdgeId(0), EdgeId(1)]);

        let (d, c) = fixtures::fx5();
        assert_eq!(
            extract_flame_integral(&d, &c, &default_order(&d)).unwrap_err(),
            Error::NonIntegral(EdgeId(0))
        );
    }

    #[test]
    fn integral_multiplicities() {
        let d = RootedDigraph::from_arcs("r", &[("r", "a"), ("a", "v"), ("r", "v")]).unwrap();
        let c = CapacityVector::from_pairs([(EdgeId(0), 2i64), (EdgeId(1), 3), (EdgeId(2), 1)])
            .unwrap();
        let out = extract_flame_integral(&d, &c, &default_order(&d)).unwrap();
        assert_eq!(
            out.edges,
            vec![EdgeId(0), EdgeId(0), EdgeId(1), EdgeId(1), EdgeId(2)]
        );
    }

    #[test]
    fn verification_flags() {
        let (d, c) = fixtures::fx2();
        let report = verify(&d, &c, &c);
        assert!(!report.is_flame && report.preserves && report.bounded);

        let zero = CapacityVector::zero();
        let report = verify(&d, &c, &zero);
        assert!(report.is_flame && !report.preserves);

        let mut over = c.clone();
        over.set(EdgeId(0), q(2, 1)).unwrap();
        assert!(!verify(&d, &c, &over).bounded);
    }

    #[test]
    fn trimming() {
        let (d, c) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        let y = trim_unused(&d, &c, v).unwrap();
        assert_eq!(d.in_degree(&y, v), q(2, 1));
        assert!(d.in_edges(v).all(|e| {
            let x = y.get(e.id);
            x == q(0, 1) || x == q(1, 1)
        }));
        assert_eq!(lambda_all(&d, &y), lambda_all(&d, &c));

        let (d, c) = fixtures::fx1();
        assert_eq!(trim_unused(&d, &c, d.vertex("v").unwrap()).unwrap(), c);

        let d = RootedDigraph::from_arcs("r", &[("r", "a"), ("b", "v"), ("v", "a")]).unwrap();
        let c = CapacityVector::<Rational>::unit(&d);
        let y = trim_unused(&d, &c, d.vertex("v").unwrap()).unwrap();
        assert_eq!(y.get(EdgeId(1)), q(0, 1));
        assert_eq!(lambda_all(&d, &y), lambda_all(&d, &c));
    }
}
