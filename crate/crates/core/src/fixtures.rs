//! The small reference graphs used across tests and documentation.

use crate::digraph::{CapacityVector, EdgeId, RootedDigraph};
use crate::text;
use crate::Rational;

pub const FX1: &str = include_str!("../fixtures/fx1.graph");
pub const FX2: &str = include_str!("../fixtures/fx2.graph");
pub const FX3: &str = include_str!("../fixtures/fx3.graph");
pub const FX4: &str = include_str!("../fixtures/fx4.graph");
pub const FX5: &str = include_str!("../fixtures/fx5.graph");
pub const FX6: &str = include_str!("../fixtures/fx6.graph");

fn load(src: &str) -> (RootedDigraph, CapacityVector<Rational>) {
    let g = text::parse(src).expect("bundled fixture parses");
    (g.digraph, g.capacities)
}

/// Diamond: `r->a, r->b, a->v, b->v`.
pub fn fx1() -> (RootedDigraph, CapacityVector<Rational>) {
    load(FX1)
}

/// Skip: `r->a, a->v, a->b, b->v, r->v`.
pub fn fx2() -> (RootedDigraph, CapacityVector<Rational>) {
    load(FX2)
}

/// Chain: `r->a, a->v`.
pub fn fx3() -> (RootedDigraph, CapacityVector<Rational>) {
    load(FX3)
}

/// Two parallel unit edges `r->v`.
pub fn fx4() -> (RootedDigraph, CapacityVector<Rational>) {
    load(FX4)
}

/// `r->a` at 1/2, `a->v` at 1, `r->v` at 1/3.
pub fn fx5() -> (RootedDigraph, CapacityVector<Rational>) {
    load(FX5)
}

/// `r->a, a->u, r->u`, unit capacities.
pub fn fx6() -> (RootedDigraph, CapacityVector<Rational>) {
    load(FX6)
}

/// Reference vector `y = (1, 1, 0)` on [`fx6`].
pub fn fx6_reference() -> CapacityVector<Rational> {
    let one = Rational::from_integer(1.into());
    CapacityVector::from_pairs([(EdgeId(0), one.clone()), (EdgeId(1), one)]).expect("nonnegative")
}

pub fn all() -> Vec<(&'static str, RootedDigraph, CapacityVector<Rational>)> {
    [
        ("fx1", FX1),
        ("fx2", FX2),
        ("fx3", FX3),
        ("fx4", FX4),
        ("fx5", FX5),
        ("fx6", FX6),
    ]
    .into_iter()
    .map(|(name, src)| {
        let (d, c) = load(src);
        (name, d, c)
    })
    .collect()
}
