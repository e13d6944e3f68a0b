//! Helpers shared by the integration and acceptance suites.
#![allow(dead_code)] // each test binary uses its own subset

use plateau::complex::{CellComplex, CellId};
use plateau::function::CellFunction;
use plateau::morse::{build_total_order, GradientField};
use plateau::persistence::{all_persistence_pairs, DiagramPoint, PersistenceRecord};
use plateau_oracles::gen::{random_instance, InstanceKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const KINDS: [InstanceKind; 3] = [
    InstanceKind::Sphere,
    InstanceKind::Torus,
    InstanceKind::Grid,
];

/// One capped random instance; the kind cycles with `index` and the value
/// distribution alternates between small integers and uniform reals.
pub fn instance(
    rng: &mut ChaCha8Rng,
    index: usize,
    sphere_torus_cells: usize,
    grid_cells: usize,
) -> (CellComplex, CellFunction) {
    let kind = KINDS[index % 3];
    let max_cells = match kind {
        InstanceKind::Grid => grid_cells,
        _ => sphere_torus_cells,
    };
    let integer = index.is_multiple_of(2);
    random_instance(kind, max_cells, integer, rng).expect("instance generation")
}

/// The input records at threshold zero, along with a delta drawn from
/// {0, small, large} according to `mode`.
pub fn records_and_delta(
    complex: &CellComplex,
    f: &CellFunction,
    mode: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<PersistenceRecord>, f64) {
    let empty = GradientField::empty(complex.len());
    let order = build_total_order(complex, f, &empty).unwrap();
    let (records, _, _) = all_persistence_pairs(complex, f, &order, 0.0).unwrap();
    let p_max = records
        .iter()
        .filter(|r| !r.is_essential())
        .map(|r| r.persistence())
        .fold(0.0f64, f64::max);
    let delta = match mode % 3 {
        0 => 0.0,
        1 => {
            if p_max > 0.0 {
                p_max * rng.gen_range(0.1..0.4)
            } else {
                0.5
            }
        }
        _ => {
            if p_max > 0.0 {
                p_max * rng.gen_range(0.55..0.9)
            } else {
                1.0
            }
        }
    };
    (records, delta)
}

/// Off-diagonal finite points of a record set.
pub fn finite_points(records: &[PersistenceRecord]) -> Vec<DiagramPoint> {
    records
        .iter()
        .filter(|r| !r.is_essential() && r.persistence() > 0.0)
        .map(|r| DiagramPoint {
            dim: r.homology_dim(),
            birth: r.birth,
            death: r.death,
        })
        .collect()
}

/// Essential births per homology dimension, sorted.
pub fn essential_births(records: &[PersistenceRecord]) -> [Vec<f64>; 3] {
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for r in records.iter().filter(|r| r.is_essential()) {
        out[r.homology_dim() as usize].push(r.birth);
    }
    for v in &mut out {
        v.sort_by(f64::total_cmp);
    }
    out
}

/// Recomputes the records of `g` as a pseudo-Morse function consistent
/// with `field`.
pub fn recompute_records(
    complex: &CellComplex,
    g: &CellFunction,
    field: &GradientField,
) -> Vec<PersistenceRecord> {
    let order = build_total_order(complex, g, field).expect("output stays consistent");
    let (records, _, _) = all_persistence_pairs(complex, g, &order, 0.0).unwrap();
    records
}

pub fn sup_distance_on_finite(complex: &CellComplex, a: &CellFunction, b: &CellFunction) -> f64 {
    let mut worst = 0.0f64;
    for c in complex.cells() {
        let (x, y) = (a.value(c), b.value(c));
        if x == y {
            continue;
        }
        worst = worst.max((x - y).abs());
    }
    worst
}

pub fn cell_values(complex: &CellComplex, f: &CellFunction) -> Vec<(CellId, f64)> {
    complex.cells().map(|c| (c, f.value(c))).collect()
}
