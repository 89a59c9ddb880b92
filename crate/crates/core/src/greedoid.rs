//! The greedoid of flame edge sets.
//!
//! In a multigraph, the edge sets of sub-flames form a greedoid: a smaller
//! flame can always be grown by an edge of a larger one. The growth step is
//! constructive. Take the largest tight set `U` of a vertex whose
//! connectivity is still short; any host edge entering `U` that is missing
//! from the flame can be added, and it becomes a coloop at its head.
//! [`fractional_augment`] is the capacitated analogue, which raises one
//! coordinate by a certified positive amount.

use std::collections::BTreeSet;

use crate::digraph::{contract_set, CapacityVector, EdgeId, RootedDigraph, Vertex};
use crate::error::{Error, Result};
use crate::flame::{is_flame, verify, FlameReport};
use crate::flow::{lambda, lambda_all, min_cut_maximal, TightSet};
use crate::gammoid::unit_lambda;
use crate::scalar::{min_of, Scalar};

/// Default cap on the ground set for [`check_greedoid_axioms`].
pub const DEFAULT_MAX_EDGES: usize = 12;

/// Subsets are enumerated as bitmasks; this is the hard ceiling.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentationStep<T> {
    pub edge: EdgeId,
    /// Amount added to `edge`; always one in the integral setting.
    pub epsilon: T,
    pub tight_set: TightSet<T>,
    pub deficit_vertex: Vertex,
}

fn check_subgraph(d: &RootedDigraph, h: &BTreeSet<EdgeId>) -> Result<()> {
    let ids: BTreeSet<EdgeId> = d.edge_ids().collect();
    match h.iter().find(|id| !ids.contains(id)) {
        Some(&id) => Err(Error::NotASubgraph(id)),
        None => Ok(()),
    }
}

fn check_non_root(d: &RootedDigraph, u: Vertex) -> Result<()> {
    d.check_vertex(u)?;
    if u == d.root() {
        Err(Error::SinkIsRoot)
    } else {
        Ok(())
    }
}

/// One growth step for the sub-flame `h` of the multigraph `d` at a vertex
/// `u` whose connectivity in `h` is below that in `d`. Returns the lowest-id
/// edge of `d` entering the largest tight set of `u` in `h` that `h` lacks.
pub fn find_augmenting_edge(
    d: &RootedDigraph,
    h: &BTreeSet<EdgeId>,
    u: Vertex,
) -> Result<AugmentationStep<i64>> {
    check_subgraph(d, h)?;
    check_non_root(d, u)?;
    let hc = CapacityVector::<i64>::indicator(h);
    let (flame, report) = is_flame(d, &hc);
    if !flame {
        return Err(Error::NotAFlame(
            report.first_violation().expect("a violating row exists"),
        ));
    }
    if lambda(d, &hc, u)? >= unit_lambda(d, u)? {
        return Err(Error::NoDeficit(u));
    }
    let tight_set = min_cut_maximal(d, &hc, u)?;
    let edge = d
        .entering(&tight_set.set)
        .map(|e| e.id)
        .filter(|id| !h.contains(id))
        .min()
        .expect("the host has more edges entering a tight set of a deficit vertex");
    Ok(AugmentationStep {
        edge,
        epsilon: 1,
        tight_set,
        deficit_vertex: u,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalFlame {
    pub edges: BTreeSet<EdgeId>,
    pub steps: Vec<AugmentationStep<i64>>,
    pub report: FlameReport<i64>,
}

/// Grows a flame from the empty edge set, always repairing the lowest-index
/// deficit vertex, until every connectivity of `d` is attained.
pub fn build_maximal_flame(d: &RootedDigraph) -> MaximalFlame {
    let unit = CapacityVector::<i64>::unit(d);
    let target = lambda_all(d, &unit);
    let mut edges = BTreeSet::new();
    let mut steps = Vec::new();
    loop {
        let current = lambda_all(d, &CapacityVector::<i64>::indicator(&edges));
        let deficit = d.non_root().find(|v| current[v] < target[v]);
        let Some(u) = deficit else { break };
        let step = find_augmenting_edge(d, &edges, u)
            .expect("the current edge set is a flame with a deficit at u");
        edges.insert(step.edge);
        steps.push(step);
    }
    let report = verify(d, &unit, &CapacityVector::indicator(&edges));
    MaximalFlame {
        edges,
        steps,
        report,
    }
}

/// One certified step `y -> y + eps * chi_e` for a fractional flame
/// `y <= c` with a connectivity deficit at `u`. The result is again a
/// fractional flame and the connectivity at the head of `e` grows by `eps`.
pub fn fractional_augment<T: Scalar>(
    d: &RootedDigraph,
    c: &CapacityVector<T>,
    y: &CapacityVector<T>,
    u: Vertex,
) -> Result<(AugmentationStep<T>, CapacityVector<T>)> {
    check_non_root(d, u)?;
    if let Some(id) = y.first_exceeding(c) {
        return Err(Error::NotDominated(id));
    }
    let (flame, report) = is_flame(d, y);
    if !flame {
        return Err(Error::NotAFlame(
            report.first_violation().expect("a violating row exists"),
        ));
    }
    if lambda(d, y, u)? >= lambda(d, c, u)? {
        return Err(Error::NoDeficit(u));
    }

    let tight_set = min_cut_maximal(d, y, u)?;
    let edge = d
        .entering(&tight_set.set)
        .map(|e| e.id)
        .filter(|&id| c.get(id) > y.get(id))
        .min()
        .expect("c exceeds y on some edge entering a tight set of a deficit vertex");

    let mut epsilon = c.get(edge) - y.get(edge);
    for w in d.non_root().filter(|w| !tight_set.set.contains(w)) {
        let mut bigger = tight_set.set.clone();
        bigger.insert(w);
        let quotient = contract_set(d, y, &bigger, u)?;
        let image = quotient.vertex_map[u.0];
        let best = lambda(&quotient.digraph, &quotient.capacities, image)?;
        epsilon = min_of(epsilon, best - tight_set.value.clone());
    }

    let mut augmented = y.clone();
    augmented.add(edge, epsilon.clone())?;
    Ok((
        AugmentationStep {
            edge,
            epsilon,
            tight_set,
            deficit_vertex: u,
        },
        augmented,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedoidCheckReport {
    pub ground_size: usize,
    /// Every flame edge set, ordered by size and then by ids.
    pub members: Vec<BTreeSet<EdgeId>>,
    pub contains_empty: bool,
    pub augmentation: bool,
    /// A pair `(F, F')` with `|F| < |F'|` that cannot be augmented.
    pub counterexample: Option<(BTreeSet<EdgeId>, BTreeSet<EdgeId>)>,
    pub accessible: bool,
    pub downward_closed: bool,
    pub basis_sizes: BTreeSet<usize>,
    /// Sum over non-root vertices of the edge-connectivity in the host.
    pub lambda_sum: usize,
}

impl GreedoidCheckReport {
    pub fn is_greedoid(&self) -> bool {
        self.contains_empty && self.augmentation
    }

    pub fn bases_equicardinal(&self) -> bool {
        self.basis_sizes.len() == 1
    }

    /// Every basis has exactly `lambda_sum` edges.
    pub fn bases_attain_lambda_sum(&self) -> bool {
        self.basis_sizes.iter().all(|&s| s == self.lambda_sum)
    }

    pub fn holds(&self) -> bool {
        self.is_greedoid()
            && self.accessible
            && self.bases_equicardinal()
            && self.bases_attain_lambda_sum()
    }
}

/// Whether the edge subset encoded by `mask` (bit `i` is the `i`-th stored
/// edge of `d`) spans a flame under unit capacities.
fn mask_is_flame(d: &RootedDigraph, mask: u32) -> bool {
    let keep: BTreeSet<EdgeId> = d
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e.id)
        .collect();
    let h = d.restrict(&keep);
    let unit = CapacityVector::<i64>::unit(&h);
    let flame = h.non_root().all(|v| {
        let rho = h.in_degree(&unit, v);
        rho == 0 || lambda(&h, &unit, v).expect("non-root vertex") == rho
    });
    flame
}

/// Enumerates every flame edge set of `d` and checks the greedoid axioms,
/// accessibility and the basis sizes exhaustively.
pub fn check_greedoid_axioms(d: &RootedDigraph, max_edges: usize) -> Result<GreedoidCheckReport> {
    let m = d.edge_count();
    let limit = max_edges.min(ENUMERATION_LIMIT);
    if m > limit {
        return Err(Error::SizeBound {
            what: "greedoid check ground set",
            limit,
            actual: m,
        });
    }
    let total = 1u32 << m;
    let member: Vec<bool> = (0..total).map(|mask| mask_is_flame(d, mask)).collect();
    // Bits outside F whose addition stays a flame.
    let grow: Vec<u32> = (0..total)
        .map(|f| {
            (0..m)
                .map(|b| 1u32 << b)
                .filter(|&bit| f & bit == 0 && member[(f | bit) as usize])
                .fold(0, |acc, bit| acc | bit)
        })
        .collect();
    let mut flames: Vec<u32> = (0..total).filter(|&f| member[f as usize]).collect();
    flames.sort_by_key(|&f| (f.count_ones(), f));

    let mut counterexample = None;
    'outer: for &small in &flames {
        for &large in flames.iter().rev() {
            if large.count_ones() <= small.count_ones() {
                break;
            }
            if large & !small & grow[small as usize] == 0 {
                counterexample = Some((small, large));
                break 'outer;
            }
        }
    }

    let accessible = flames
        .iter()
        .all(|&f| f == 0 || (0..m).any(|b| f >> b & 1 == 1 && member[(f & !(1 << b)) as usize]));
    let downward_closed = flames
        .iter()
        .all(|&f| (0..m).all(|b| f >> b & 1 == 0 || member[(f & !(1 << b)) as usize]));
    let basis_sizes = flames
        .iter()
        .filter(|&&f| grow[f as usize] == 0)
        .map(|f| f.count_ones() as usize)
        .collect();

    let unit = CapacityVector::<i64>::unit(d);
    let lambda_sum = lambda_all(d, &unit).values().sum::<i64>() as usize;

    let to_set = |mask: u32| -> BTreeSet<EdgeId> {
        d.edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.id)
            .collect()
    };
    Ok(GreedoidCheckReport {
        ground_size: m,
        members: flames.iter().map(|&f| to_set(f)).collect(),
        contains_empty: member[0],
        augmentation: counterexample.is_none(),
        counterexample: counterexample.map(|(a, b)| (to_set(a), to_set(b))),
        accessible,
        downward_closed,
        basis_sizes,
        lambda_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gammoid::is_coloop;
    use crate::Rational;

    fn ids(list: &[usize]) -> BTreeSet<EdgeId> {
        list.iter().map(|&i| EdgeId(i)).collect()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d).unwrap()
    }

    #[test]
    fn chain_augmentation() {
        let (d, _) = fixtures::fx3();
        let v = d.vertex("v").unwrap();
        let step = find_augmenting_edge(&d, &ids(&[0]), v).unwrap();
        assert_eq!(step.edge, EdgeId(1));
        assert_eq!(step.tight_set.set, BTreeSet::from([v]));
        assert_eq!(step.tight_set.value, 0);
        assert!(is_flame(&d, &CapacityVector::<i64>::indicator(&ids(&[0, 1]))).0);
    }

    #[test]
    fn skip_augmentation() {
        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        let step = find_augmenting_edge(&d, &ids(&[0, 2]), v).unwrap();
        assert_eq!(step.tight_set.set, BTreeSet::from([v]));
        assert_eq!(step.edge, EdgeId(1));
        let grown = d.restrict(&ids(&[0, 1, 2]));
        assert!(is_coloop(&grown, v, step.edge).unwrap());
    }

    #[test]
    fn parallel_augmentation() {
        let (d, _) = fixtures::fx4();
        let step = find_augmenting_edge(&d, &ids(&[0]), d.vertex("v").unwrap()).unwrap();
        assert_eq!(step.edge, EdgeId(1));
    }

    #[test]
    fn augmentation_preconditions() {
        let (d, _) = fixtures::fx2();
        let v = d.vertex("v").unwrap();
        // all of in(v) without support upstream is not a flame
        assert!(matches!(
            find_augmenting_edge(&d, &ids(&[1, 3, 4]), v),
            Err(Error::NotAFlame(_))
        ));
        let (d, _) = fixtures::fx3();
        assert_eq!(
            find_augmenting_edge(&d, &ids(&[0, 1]), d.vertex("v").unwrap()).unwrap_err(),
            Error::NoDeficit(d.vertex("v").unwrap())
        );
        assert_eq!(
            find_augmenting_edge(&d, &ids(&[7]), d.vertex("v").unwrap()).unwrap_err(),
            Error::NotASubgraph(EdgeId(7))
        );
    }

    #[test]
    fn maximal_flames() {
        let (d, _) = fixtures::fx2();
        let out = build_maximal_flame(&d);
        assert!(out.edges == ids(&[0, 1, 2, 4]) || out.edges == ids(&[0, 2, 3, 4]));
        assert_eq!(out.steps.len(), 4);
        assert!(out.report.holds());

        let (d, _) = fixtures::fx1();
        assert_eq!(build_maximal_flame(&d).edges, ids(&[0, 1, 2, 3]));

        let d = RootedDigraph::from_arcs("r", &[]).unwrap();
        assert!(build_maximal_flame(&d).edges.is_empty());
    }

    #[test]
    fn fractional_step_on_fx6() {
        let (d, c) = fixtures::fx6();
        let y = fixtures::fx6_reference();
        let u = d.vertex("u").unwrap();
        let (step, grown) = fractional_augment(&d, &c, &y, u).unwrap();
        assert_eq!(step.edge, EdgeId(2));
        assert_eq!(step.epsilon, q(1, 1));
        assert_eq!(
            step.tight_set.set,
            BTreeSet::from([d.vertex("a").unwrap(), u])
        );
        assert_eq!(lambda(&d, &grown, u).unwrap(), q(2, 1));
    }

    #[test]
    fn fractional_step_from_zero_on_fx5() {
        let (d, c) = fixtures::fx5();
        let a = d.vertex("a").unwrap();
        let (step, grown) = fractional_augment(&d, &c, &CapacityVector::zero(), a).unwrap();
        assert_eq!(step.tight_set.set.len(), 2);
        assert_eq!(step.edge, EdgeId(0));
        assert_eq!(step.epsilon, q(1, 2));
        assert_eq!(lambda(&d, &grown, a).unwrap(), q(1, 2));
    }

    #[test]
    fn fractional_step_with_strict_superset_bound() {
        // U = {v} is tight at 0 under y = 0 on in(v); the superset {a, v}
        // has in-capacity 1/4 so the step is capped there.
        let d = RootedDigraph::from_arcs("r", &[("r", "a"), ("a", "v")]).unwrap();
        let c = CapacityVector::from_pairs([(EdgeId(0), q(1, 1)), (EdgeId(1), q(1, 1))]).unwrap();
        let y = CapacityVector::from_pairs([(EdgeId(0), q(1, 4))]).unwrap();
        let v = d.vertex("v").unwrap();
        let (step, grown) = fractional_augment(&d, &c, &y, v).unwrap();
        assert_eq!(step.edge, EdgeId(1));
        assert_eq!(step.epsilon, q(1, 4));
        assert!(is_flame(&d, &grown).0);
    }

    #[test]
    fn fractional_step_needs_deficit() {
        let (d, c) = fixtures::fx5();
        let (f, _) = crate::flame::extract_flame(&d, &c, &crate::flame::default_order(&d)).unwrap();
        for u in d.non_root() {
            assert_eq!(
                fractional_augment(&d, &c, &f, u).unwrap_err(),
                Error::NoDeficit(u)
            );
        }
        let mut over = c.clone();
        over.add(EdgeId(0), q(1, 1)).unwrap();
        assert_eq!(
            fractional_augment(&d, &c, &over, d.vertex("a").unwrap()).unwrap_err(),
            Error::NotDominated(EdgeId(0))
        );
    }

    #[test]
    fn greedoid_check_on_chain() {
        let (d, _) = fixtures::fx3();
        let report = check_greedoid_axioms(&d, DEFAULT_MAX_EDGES).unwrap();
        assert_eq!(report.members, vec![ids(&[]), ids(&[0]), ids(&[0, 1])]);
        assert!(report.holds());
        assert!(!report.downward_closed);
    }

    #[test]
    fn greedoid_check_on_parallel_edges() {
        let (d, _) = fixtures::fx4();
        let report = check_greedoid_axioms(&d, DEFAULT_MAX_EDGES).unwrap();
        assert_eq!(report.members.len(), 4);
        assert!(report.holds() && report.downward_closed);
    }

    #[test]
    fn greedoid_check_on_skip() {
        let (d, _) = fixtures::fx2();
        let report = check_greedoid_axioms(&d, DEFAULT_MAX_EDGES).unwrap();
        assert!(report.holds());
        assert_eq!(report.basis_sizes, BTreeSet::from([4]));
        assert_eq!(report.lambda_sum, 4);
    }

    #[test]
    fn greedoid_check_bound() {
        let (d, _) = fixtures::fx2();
        assert!(matches!(
            check_greedoid_axioms(&d, 4),
            Err(Error::SizeBound {
                limit: 4,
                actual: 5,
                ..
            })
        ));
    }
}
