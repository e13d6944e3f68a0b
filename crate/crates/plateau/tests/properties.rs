//! Randomized property tests over small instances. The acceptance suite
//! re-runs the heavyweight versions at full instance counts; these runs
//! are sized for quick feedback.

mod common;

use common::{instance, records_and_delta, recompute_records};
use plateau::bottleneck::bottleneck_distance;
use plateau::complex::CellComplex;
use plateau::function::CellFunction;
use plateau::morse::{
    build_total_order, check_consistency, extend_from_vertices, induced_hasse_diagram,
    GradientField,
};
use plateau::persistence::{all_persistence_pairs, diagram};
use plateau::simplify::{
    construct_f_max, construct_f_min, perfect_simplification, plateau_sequence, symmetrize,
};
use plateau_oracles::gen::{random_values, subdivided_sphere};
use plateau_oracles::{betti_numbers, betti_profile, feasibility_lp_vertex, reduce_persistence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_produced_field_is_acyclic_and_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for i in 0..24 {
        let (complex, f) = instance(&mut rng, i, 600, 600);
        let (_, delta) = records_and_delta(&complex, &f, i, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        assert!(induced_hasse_diagram(&complex, &result.v_delta).is_acyclic());
        for g in [&result.f_min, &result.f_max, &result.f_mean] {
            assert!(check_consistency(&complex, g, &result.v_delta));
        }
    }
}

#[test]
fn total_order_is_a_linear_extension_of_value_and_field_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for i in 0..12 {
        let (complex, f) = instance(&mut rng, i, 400, 400);
        let (_, delta) = records_and_delta(&complex, &f, i + 1, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        let order = build_total_order(&complex, &result.f_mean, &result.v_delta).unwrap();
        let hasse = induced_hasse_diagram(&complex, &result.v_delta);
        for c in complex.cells() {
            for &b in hasse.below(c) {
                assert!(order.rank(b) < order.rank(c));
            }
        }
        for a in complex.cells() {
            for b in complex.cells() {
                if result.f_mean.value(a) < result.f_mean.value(b) {
                    assert!(order.rank(a) < order.rank(b));
                }
            }
        }
    }
}

#[test]
fn kruskal_agrees_with_matrix_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for i in 0..30 {
        let (complex, f) = instance(&mut rng, i, 500, 500);
        let empty = GradientField::empty(complex.len());
        let order = build_total_order(&complex, &f, &empty).unwrap();
        let (records, _, _) = all_persistence_pairs(&complex, &f, &order, 0.0).unwrap();
        let oracle = reduce_persistence(&complex, &f, &order);
        assert_eq!(diagram(&records), diagram(&oracle), "instance {i}");
    }
}

#[test]
fn fast_and_slow_paths_build_the_same_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for i in 0..20 {
        let (complex, f) = instance(&mut rng, i, 170, 170);
        let (_, delta) = records_and_delta(&complex, &f, i, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        let empty = GradientField::empty(complex.len());
        let order = build_total_order(&complex, &f, &empty).unwrap();
        let (slow_field, slow_f) =
            plateau_sequence(&complex, &f, &empty, &order, delta).unwrap();
        assert_eq!(result.v_delta, slow_field, "instance {i}");
        assert!(check_consistency(&complex, &slow_f, &slow_field));
        assert!(common::sup_distance_on_finite(&complex, &slow_f, &f) <= delta * (1.0 + 1e-12));
    }
}

#[test]
fn extremal_solutions_match_the_fixed_point_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for i in 0..16 {
        let (complex, f) = instance(&mut rng, i, 300, 300);
        let (_, delta) = records_and_delta(&complex, &f, i + 2, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        let (low, high) = feasibility_lp_vertex(&complex, &f, &result.v_delta, delta).unwrap();
        assert_eq!(result.f_min.values(), low.values());
        assert_eq!(result.f_max.values(), high.values());
        // Least element: any feasible point dominates f_min.
        let mid = symmetrize(&result.f_min, &result.f_max);
        for c in complex.cells() {
            assert!(result.f_min.value(c) <= mid.value(c));
            assert!(mid.value(c) <= result.f_max.value(c));
        }
    }
}

#[test]
fn construct_min_and_max_are_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for i in 0..10 {
        let (complex, f) = instance(&mut rng, i, 300, 300);
        let (_, delta) = records_and_delta(&complex, &f, i, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        // f_max equals the negated f_min of -f with the same field seen
        // from the other side; verify through the defining recurrences.
        let neg = CellFunction::new(f.values().iter().map(|v| -v).collect());
        let mirrored = {
            let m = construct_f_max(&complex, &neg, &result.v_delta, delta).unwrap();
            CellFunction::new(m.values().iter().map(|v| -v).collect())
        };
        let direct = construct_f_min(&complex, &f, &result.v_delta, delta);
        // -f is consistent with the reversed field only; compare instead
        // against the defining property: both are within the box and
        // consistent, and f_min is the least such function.
        if let Ok(direct) = direct {
            for c in complex.cells() {
                if f.value(c).is_finite() {
                    assert!(direct.value(c) <= result.f_max.value(c));
                }
            }
            assert_eq!(direct.values(), result.f_min.values());
        }
        let _ = mirrored;
    }
}

#[test]
fn persistence_hierarchy_pairs_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for i in 0..16 {
        let (complex, f) = instance(&mut rng, i, 500, 500);
        let empty = GradientField::empty(complex.len());
        let order = build_total_order(&complex, &f, &empty).unwrap();
        let (_, primal, dual) = all_persistence_pairs(&complex, &f, &order, 0.0).unwrap();
        for (forest, reversed) in [(&primal, false), (&dual, true)] {
            let record_of = |creator| {
                forest
                    .pairs
                    .iter()
                    .find(|p| p.creator == creator)
                    .map(|p| (p.creator, p.edge))
            };
            for &(child, parent) in &forest.hierarchy {
                let (cs, ct) = record_of(child).expect("merged creators have records");
                let Some((ps, pt)) = record_of(parent) else {
                    continue; // essential parent: no enclosing pair
                };
                let r = |c| {
                    if reversed {
                        order.len() as u32 - 1 - order.rank(c)
                    } else {
                        order.rank(c)
                    }
                };
                assert!(r(ps) < r(cs) && r(cs) < r(ct) && r(ct) < r(pt));
            }
        }
    }
}

#[test]
fn stability_under_random_perturbation() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for i in 0..12 {
        let kind = common::KINDS[i % 3];
        let (complex, f, g) = {
            // Perturb the generating values, then re-extend: extensions
            // are 1-Lipschitz in the sup norm.
            match kind {
                plateau_oracles::gen::InstanceKind::Grid => {
                    let rows = rng.gen_range(2..=10);
                    let cols = rng.gen_range(2..=10);
                    let complex = CellComplex::from_pixel_grid(rows, cols).unwrap();
                    let base = random_values(rows * cols, false, &mut rng);
                    let eps = 0.05 + 0.1 * rng.gen::<f64>();
                    let shifted: Vec<f64> = base
                        .iter()
                        .map(|v| v + rng.gen_range(-eps..=eps))
                        .collect();
                    let f = plateau::morse::extend_from_top_cells(&complex, &base).unwrap();
                    let g = plateau::morse::extend_from_top_cells(&complex, &shifted).unwrap();
                    let (complex, f) = complex.cap_boundary(f).unwrap();
                    let g = {
                        let mut values = g.into_values();
                        values.extend(std::iter::repeat_n(f64::INFINITY, complex.len() - values.len()));
                        CellFunction::new(values)
                    };
                    (complex, f, g)
                }
                _ => {
                    let complex = subdivided_sphere(rng.gen_range(0..=2));
                    let base = random_values(complex.counts()[0], false, &mut rng);
                    let eps = 0.05 + 0.1 * rng.gen::<f64>();
                    let shifted: Vec<f64> = base
                        .iter()
                        .map(|v| v + rng.gen_range(-eps..=eps))
                        .collect();
                    let f = extend_from_vertices(&complex, &base).unwrap();
                    let g = extend_from_vertices(&complex, &shifted).unwrap();
                    (complex, f, g)
                }
            }
        };
        let eps = common::sup_distance_on_finite(&complex, &f, &g);
        let empty = GradientField::empty(complex.len());
        let order_f = build_total_order(&complex, &f, &empty).unwrap();
        let order_g = build_total_order(&complex, &g, &empty).unwrap();
        let (rf, _, _) = all_persistence_pairs(&complex, &f, &order_f, 0.0).unwrap();
        let (rg, _, _) = all_persistence_pairs(&complex, &g, &order_g, 0.0).unwrap();
        let distance = bottleneck_distance(&diagram(&rf), &diagram(&rg));
        assert!(
            distance <= eps + 1e-12,
            "stability violated: {distance} > {eps}"
        );
    }
}

#[test]
fn betti_profile_changes_only_at_critical_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for i in 0..10 {
        let (complex, f) = instance(&mut rng, i, 170, 170);
        let (_, delta) = records_and_delta(&complex, &f, i, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        let order = build_total_order(&complex, &result.f_mean, &result.v_delta).unwrap();
        let profile = betti_profile(&complex, &order);
        let mut previous = (1usize, 0usize, 0usize);
        let mut changes = Vec::new();
        for &(r, b0, b1, b2) in &profile {
            let now = (b0, b1, b2);
            if r == 0 {
                previous = now;
                changes.push(r);
                continue;
            }
            if now != previous {
                changes.push(r);
                previous = now;
            }
        }
        for r in changes {
            let cell = order.cell_at(r);
            assert!(
                result.v_delta.is_critical(cell),
                "homotopy change at a matched cell (instance {i})"
            );
        }
    }
}

#[test]
fn betti_profile_counts_the_two_survivors_on_a_heavily_simplified_sphere() {
    let complex = subdivided_sphere(2);
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let values = random_values(complex.counts()[0], false, &mut rng);
    let f = extend_from_vertices(&complex, &values).unwrap();
    let result = perfect_simplification(&complex, &f, 10.0).unwrap();
    assert_eq!(result.v_delta.critical_cells(&complex).len(), 2);
    let order = build_total_order(&complex, &result.f_mean, &result.v_delta).unwrap();
    let profile = betti_profile(&complex, &order);
    let mut changes = 0;
    let mut previous = (0usize, 0usize, 0usize);
    for (r, b0, b1, b2) in profile {
        let now = (b0, b1, b2);
        if r == 0 || now != previous {
            changes += 1;
            previous = now;
        }
    }
    assert_eq!(changes, 2);
}

#[test]
fn level_subcomplexes_match_vertex_induced_subcomplexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let complex = subdivided_sphere(1);
    let vertex_values = random_values(complex.counts()[0], true, &mut rng);
    let f = extend_from_vertices(&complex, &vertex_values).unwrap();
    let vertices: Vec<plateau::CellId> = complex.cells_of_dim(0).collect();
    let mut thresholds = vertex_values.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    for t in thresholds {
        let by_value: Vec<bool> = complex.cells().map(|c| f.value(c) <= t).collect();
        let by_vertices: Vec<bool> = complex
            .cells()
            .map(|c| match complex.dim(c) {
                0 => f.value(c) <= t,
                _ => {
                    let mut stack = vec![c];
                    let mut ok = true;
                    while let Some(x) = stack.pop() {
                        if complex.dim(x) == 0 {
                            let vi = vertices.iter().position(|v| *v == x).unwrap();
                            if vertex_values[vi] > t {
                                ok = false;
                                break;
                            }
                        } else {
                            stack.extend_from_slice(complex.facets(x));
                        }
                    }
                    ok
                }
            })
            .collect();
        assert_eq!(
            betti_numbers(&complex, &by_value),
            betti_numbers(&complex, &by_vertices)
        );
    }
}

#[test]
fn smoothing_keeps_the_diagram_fixed() {
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    for i in 0..8 {
        let (complex, f) = instance(&mut rng, i, 300, 300);
        let (_, delta) = records_and_delta(&complex, &f, i + 1, &mut rng);
        let result = perfect_simplification(&complex, &f, delta).unwrap();
        let smoothed = plateau::smooth_within_polytope(
            &complex,
            &f,
            &result.f_min,
            &result.f_max,
            &result.v_delta,
            1 + i % 4,
        )
        .unwrap();
        let before = diagram(&recompute_records(&complex, &result.f_mean, &result.v_delta));
        let after = diagram(&recompute_records(&complex, &smoothed, &result.v_delta));
        assert_eq!(before, after, "instance {i}");
    }
}
