//! Topological simplification of scalar fields on combinatorial surfaces.
//!
//! Given a function on the cells of a surface and a tolerance `delta`,
//! this crate produces a function within sup-norm distance `delta` whose
//! critical points are exactly the persistence pairs of the input with
//! persistence above `2 * delta`, the provable minimum. The pipeline is
//!
//! 1. build the complex ([`complex`]) and extend the input values to all
//!    cells ([`morse`]),
//! 2. cap boundary components and compute persistence pairs by Kruskal
//!    sweeps over the primal and dual 1-skeletons ([`persistence`]),
//! 3. extract the simplified gradient field from the thresholded spanning
//!    forests and construct the output function ([`simplify`]).
//!
//! Everything after sorting runs in linear time.

pub mod bottleneck;
pub mod complex;
pub mod error;
pub mod function;
pub mod morse;
pub mod persistence;
pub mod simplify;

pub use complex::{CellComplex, CellId, DualComplex, SurfaceIssue, SurfaceReport};
pub use error::{Error, Result};
pub use function::CellFunction;
pub use morse::{
    build_total_order, cancel_pair, check_consistency, extend_from_top_cells,
    extend_from_vertices, induced_hasse_diagram, trace_vpaths_from, GradientField, HasseDiagram,
    TotalOrder, VPath,
};
pub use persistence::{
    all_persistence_pairs, diagram, kruskal_persistence, DimPair, DiagramPoint, ForestPair,
    PersistenceDiagram, PersistenceRecord, SkeletonSide, SpanningForestResult,
};
pub use simplify::{
    construct_bounds, construct_f_max, construct_f_min, extract_gradient_field,
    perfect_simplification, plateau_sequence, smooth_within_polytope, symmetrize,
    SimplificationResult,
};
pub use bottleneck::bottleneck_distance;
