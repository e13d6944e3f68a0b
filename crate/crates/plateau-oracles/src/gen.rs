//! Test fixtures and randomized instance generators.

use plateau::complex::{CellComplex, CellId};
use plateau::error::Result;
use plateau::function::CellFunction;
use plateau::morse::{extend_from_top_cells, extend_from_vertices};
use rand::Rng;

/// The non-manifold 2-complex on which no perfect simplification exists.
///
/// Ids: zeta=0, gamma=1 (0-cells); a=2, b=3, c=4 (1-cells); A=5, B=6
/// (2-cells). `A` is attached along `a` once and `b` twice, `B` along `b`
/// and `c`; the complex is not locally euclidean at `b`. Values are
/// (0, 0, 1, 2, 0, 2, 3).
pub fn counterexample_complex() -> (CellComplex, CellFunction) {
    let dims = vec![0, 0, 1, 1, 1, 2, 2];
    let rows = vec![
        vec![],
        vec![],
        vec![CellId(0), CellId(1)],
        vec![CellId(0), CellId(1)],
        vec![CellId(0), CellId(1)],
        vec![CellId(2), CellId(3), CellId(3)],
        vec![CellId(3), CellId(4)],
    ];
    let complex = CellComplex::from_cell_lists(dims, rows).unwrap();
    let f = CellFunction::new(vec![0.0, 0.0, 1.0, 2.0, 0.0, 2.0, 3.0]);
    (complex, f)
}

pub const CE_ZETA: CellId = CellId(0);
pub const CE_GAMMA: CellId = CellId(1);
pub const CE_A: CellId = CellId(2);
pub const CE_B: CellId = CellId(3);
pub const CE_C: CellId = CellId(4);
pub const CE_UPPER_A: CellId = CellId(5);
pub const CE_UPPER_B: CellId = CellId(6);

/// Triangulated sphere: the tetrahedron boundary subdivided `levels`
/// times (each level splits every triangle in four).
pub fn subdivided_sphere(levels: usize) -> CellComplex {
    let mut vertex_count = 4usize;
    let mut triangles: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    for _ in 0..levels {
        let mut midpoints: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for tri in &triangles {
            let [a, b, c] = *tri;
            let mut mid = |u: usize, v: usize| {
                *midpoints.entry((u.min(v), u.max(v))).or_insert_with(|| {
                    vertex_count += 1;
                    vertex_count - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        triangles = next;
    }
    CellComplex::from_triangle_mesh(vertex_count, &triangles)
        .expect("subdivided sphere is a valid mesh")
}

/// Triangulated torus from an `n x m` periodic grid (both at least 3),
/// with the diagonal of each quad chosen by the generator.
pub fn torus_grid<R: Rng>(n: usize, m: usize, rng: &mut R) -> CellComplex {
    assert!(n >= 3 && m >= 3);
    let v = |i: usize, j: usize| (i % n) * m + (j % m);
    let mut triangles = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let (p00, p10, p01, p11) = (v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1));
            if rng.gen_bool(0.5) {
                triangles.push([p00, p10, p11]);
                triangles.push([p00, p11, p01]);
            } else {
                triangles.push([p00, p10, p01]);
                triangles.push([p10, p11, p01]);
            }
        }
    }
    CellComplex::from_triangle_mesh(n * m, &triangles).expect("torus grid is a valid mesh")
}

pub fn random_values<R: Rng>(count: usize, integer: bool, rng: &mut R) -> Vec<f64> {
    (0..count)
        .map(|_| {
            if integer {
                rng.gen_range(0..=10) as f64
            } else {
                rng.gen::<f64>()
            }
        })
        .collect()
}

/// What a random instance is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Sphere,
    Torus,
    Grid,
}

/// A random capped instance: complex, function, and the number of
/// essential classes it must have (2 for spheres and grids, 4 for tori).
pub fn random_instance<R: Rng>(
    kind: InstanceKind,
    max_cells: usize,
    integer: bool,
    rng: &mut R,
) -> Result<(CellComplex, CellFunction)> {
    let (complex, f) = match kind {
        InstanceKind::Sphere => {
            let levels = match max_cells {
                0..=49 => 0,
                50..=193 => rng.gen_range(0..=1),
                194..=769 => rng.gen_range(0..=2),
                _ => rng.gen_range(0..=3),
            };
            let complex = subdivided_sphere(levels);
            let values = random_values(complex.counts()[0], integer, rng);
            let f = extend_from_vertices(&complex, &values)?;
            (complex, f)
        }
        InstanceKind::Torus => {
            let max_side = ((max_cells / 6) as f64).sqrt().floor() as usize;
            let n = rng.gen_range(3..=max_side.max(3));
            let m = rng.gen_range(3..=max_side.max(3));
            let complex = torus_grid(n, m, rng);
            let values = random_values(complex.counts()[0], integer, rng);
            let f = extend_from_vertices(&complex, &values)?;
            (complex, f)
        }
        InstanceKind::Grid => {
            let max_side = (((max_cells + 2) / 4) as f64).sqrt().floor() as usize;
            let rows = rng.gen_range(1..=max_side.max(1));
            let cols = rng.gen_range(1..=max_side.max(1));
            let complex = CellComplex::from_pixel_grid(rows, cols)?;
            let values = random_values(rows * cols, integer, rng);
            let f = extend_from_top_cells(&complex, &values)?;
            (complex, f)
        }
    };
    complex.cap_boundary(f)
}

/// Sum of isotropic Gaussian bumps sampled on a grid, row major; `bumps`
/// entries are (row, col, sigma, height).
pub fn gaussian_image(rows: usize, cols: usize, bumps: &[(f64, f64, f64, f64)]) -> Vec<f64> {
    let mut out = vec![0.0f64; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let mut v = 0.0;
            for &(br, bc, sigma, height) in bumps {
                let d2 = (r as f64 - br).powi(2) + (c as f64 - bc).powi(2);
                v += height * (-d2 / (2.0 * sigma * sigma)).exp();
            }
            out[r * cols + c] = v;
        }
    }
    out
}

/// Multi-octave value noise on a grid, row major: bilinear interpolation
/// of random lattices with geometrically decaying amplitude.
pub fn fractal_terrain<R: Rng>(rows: usize, cols: usize, octaves: usize, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0f64; rows * cols];
    let mut amplitude = 1.0f64;
    for octave in 0..octaves {
        let step = (rows.max(cols) >> octave).max(1);
        let lat_rows = rows / step + 2;
        let lat_cols = cols / step + 2;
        let lattice: Vec<f64> = (0..lat_rows * lat_cols).map(|_| rng.gen::<f64>()).collect();
        for r in 0..rows {
            for c in 0..cols {
                let (gr, gc) = (r / step, c / step);
                let (fr, fc) = (
                    (r % step) as f64 / step as f64,
                    (c % step) as f64 / step as f64,
                );
                let at = |i: usize, j: usize| lattice[i * lat_cols + j];
                let top = at(gr, gc) * (1.0 - fc) + at(gr, gc + 1) * fc;
                let bottom = at(gr + 1, gc) * (1.0 - fc) + at(gr + 1, gc + 1) * fc;
                out[r * cols + c] += amplitude * (top * (1.0 - fr) + bottom * fr);
            }
        }
        amplitude *= 0.5;
    }
    out
}
