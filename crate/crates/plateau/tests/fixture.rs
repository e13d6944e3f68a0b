//! The non-manifold counterexample complex: two 2-cells sharing a 1-cell
//! three times over. Every pipeline stage must treat it exactly as the
//! theory predicts: the pairs exist, but no perfect simplification does.

use plateau::complex::CellId;
use plateau::morse::{build_total_order, GradientField};
use plateau::persistence::{kruskal_persistence, DimPair, SkeletonSide};
use plateau::{diagram, perfect_simplification, Error, SurfaceIssue};
use plateau_oracles::feasibility_lp_vertex;
use plateau_oracles::gen::{
    counterexample_complex, CE_A, CE_B, CE_C, CE_GAMMA, CE_UPPER_A, CE_UPPER_B, CE_ZETA,
};
use plateau_oracles::reduce_persistence;

#[test]
fn total_order_follows_value_then_dimension_then_id() {
    let (complex, f) = counterexample_complex();
    let order =
        build_total_order(&complex, &f, &GradientField::empty(complex.len())).unwrap();
    let sequence: Vec<CellId> = order.iter_by_rank().collect();
    assert_eq!(
        sequence,
        vec![CE_ZETA, CE_GAMMA, CE_C, CE_A, CE_B, CE_UPPER_A, CE_UPPER_B]
    );
}

#[test]
fn primal_sweep_finds_the_vertex_pair() {
    let (complex, f) = counterexample_complex();
    let order =
        build_total_order(&complex, &f, &GradientField::empty(complex.len())).unwrap();
    let result =
        kruskal_persistence(&complex, SkeletonSide::Primal, &order, &f, 0.0).unwrap();
    assert_eq!(result.pairs.len(), 1);
    assert_eq!(result.pairs[0].creator, CE_GAMMA);
    assert_eq!(result.pairs[0].edge, CE_C);
    assert_eq!(result.pairs[0].persistence, 0.0);
    assert_eq!(result.creators, vec![CE_ZETA]);
}

#[test]
fn reduction_reports_the_three_pairs() {
    let (complex, f) = counterexample_complex();
    let order =
        build_total_order(&complex, &f, &GradientField::empty(complex.len())).unwrap();
    let records = reduce_persistence(&complex, &f, &order);
    let mut finite: Vec<(CellId, CellId, f64)> = records
        .iter()
        .filter(|r| !r.is_essential())
        .map(|r| (r.positive, r.negative.unwrap(), r.persistence()))
        .collect();
    finite.sort_by_key(|a| (a.0, a.1));
    assert_eq!(
        finite,
        vec![
            (CE_GAMMA, CE_C, 0.0),
            (CE_A, CE_UPPER_A, 1.0),
            (CE_B, CE_UPPER_B, 1.0),
        ]
    );
    let essential: Vec<&plateau::PersistenceRecord> =
        records.iter().filter(|r| r.is_essential()).collect();
    assert_eq!(essential.len(), 1);
    assert_eq!(essential[0].positive, CE_ZETA);
    assert_eq!(essential[0].dim_pair, DimPair::Essential(0));

    let d = diagram(&records.iter().filter(|r| !r.is_essential()).cloned().collect::<Vec<_>>());
    let points: Vec<(f64, f64)> = d.points.iter().map(|p| (p.birth, p.death)).collect();
    assert_eq!(points, vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]);
}

#[test]
fn surface_validation_flags_the_defects() {
    let (complex, _) = counterexample_complex();
    let report = complex.validate_surface();
    assert!(!report.manifold);
    assert!(report
        .issues
        .iter()
        .any(|i| matches!(i, SurfaceIssue::EdgeCofacetExcess { edge, count: 3 } if *edge == CE_B)));
    assert!(report
        .issues
        .iter()
        .any(|i| matches!(i, SurfaceIssue::RepeatedFacet { cell } if *cell == CE_UPPER_A)));
}

#[test]
fn canceling_both_pairs_is_infeasible_at_half() {
    let (complex, f) = counterexample_complex();
    let target =
        GradientField::from_pairs(&complex, &[(CE_A, CE_UPPER_A), (CE_B, CE_UPPER_B)]).unwrap();
    assert!(feasibility_lp_vertex(&complex, &f, &target, 0.5).is_err());
    // With a slack tolerance the box constraints admit the plateau values.
    assert!(feasibility_lp_vertex(&complex, &f, &target, 1.0).is_ok());
}

#[test]
fn pipeline_refuses_the_complex() {
    let (complex, f) = counterexample_complex();
    assert!(matches!(
        perfect_simplification(&complex, &f, 0.5),
        Err(Error::NotClosedSurface { .. })
    ));
}
