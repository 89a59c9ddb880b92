//! Connectivity-preserving sparsification of rooted capacitated digraphs.
//!
//! Given a digraph with root `r` and nonnegative edge capacities `c`, a
//! *flame* is a capacity vector `f` whose in-capacity at every non-root
//! vertex equals its flow-connectivity from the root. [`flame::extract_flame`]
//! lowers `c` to a flame `f <= c` that keeps every root-to-vertex
//! connectivity unchanged, using one maximum-flow computation per vertex.
//!
//! The [`gammoid`] and [`greedoid`] modules expose the exchange structure
//! behind that result, and [`oracle`] holds slow brute-force references
//! used to certify the fast paths.
//!
//! All algorithms are generic over [`Scalar`]. Use [`Rational`] for exact
//! results; unit-capacity (multigraph) routines run on `i64`.

pub mod digraph;
pub mod error;
pub mod fixtures;
pub mod flame;
pub mod flow;
pub mod gammoid;
pub mod greedoid;
pub mod oracle;
pub mod scalar;
pub mod text;

pub use digraph::{
    contract_set, normalize, CapacityVector, Edge, EdgeId, Mode, Normalized, RootedDigraph, Vertex,
    VertexSet, Warning,
};
pub use error::{Error, Result};
pub use flame::{ExtractionTrace, FlameReport};
pub use flow::{Flow, PathDecomposition, TightSet};
pub use greedoid::{AugmentationStep, GreedoidCheckReport};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational; the default scalar.
pub type Rational = num_rational::BigRational;

/// Exact capacities, the common case.
pub type RationalCapacities = CapacityVector<Rational>;
pub type RationalFlow = Flow<Rational>;
pub type RationalFlameReport = FlameReport<Rational>;

/// Unit and small-integer capacities for the multigraph routines.
pub type IntegerCapacities = CapacityVector<i64>;

/// Inexact capacities.
pub type FloatCapacities = CapacityVector<f64>;
