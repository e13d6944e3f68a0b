//! Betti numbers over the two-element field by Gaussian elimination.

use plateau::complex::{CellComplex, CellId};
use plateau::morse::TotalOrder;

use crate::reduction::entry_times;

/// A growing GF(2) column space; rank increases when an inserted column is
/// independent of the ones already held.
struct ColumnSpace {
    words: usize,
    /// Basis columns, each with its pivot bit.
    basis: Vec<(usize, Vec<u64>)>,
}

impl ColumnSpace {
    fn new(bits: usize) -> Self {
        ColumnSpace {
            words: bits.div_ceil(64),
            basis: Vec::new(),
        }
    }

    fn column(&self, ones: impl Iterator<Item = usize>) -> Vec<u64> {
        let mut col = vec![0u64; self.words];
        for b in ones {
            col[b / 64] ^= 1 << (b % 64);
        }
        col
    }

    fn pivot(col: &[u64]) -> Option<usize> {
        for (w, x) in col.iter().enumerate().rev() {
            if *x != 0 {
                return Some(w * 64 + 63 - x.leading_zeros() as usize);
            }
        }
        None
    }

    /// Returns true (and keeps the column) when it enlarges the space.
    fn insert(&mut self, mut col: Vec<u64>) -> bool {
        loop {
            let Some(p) = Self::pivot(&col) else {
                return false;
            };
            match self.basis.iter().find(|(bp, _)| *bp == p) {
                None => {
                    self.basis.push((p, col));
                    return true;
                }
                Some((_, other)) => {
                    for (a, b) in col.iter_mut().zip(other) {
                        *a ^= b;
                    }
                }
            }
        }
    }
}

fn z2_facets(complex: &CellComplex, c: CellId) -> Vec<usize> {
    let mut ids: Vec<usize> = complex.facets(c).iter().map(|s| s.index()).collect();
    ids.sort_unstable();
    let mut out = Vec::with_capacity(ids.len());
    let mut k = 0;
    while k < ids.len() {
        let mut run = 1;
        while k + run < ids.len() && ids[k + run] == ids[k] {
            run += 1;
        }
        if run % 2 == 1 {
            out.push(ids[k]);
        }
        k += run;
    }
    out
}

/// Betti numbers of the subcomplex spanned by the included cells, which
/// must be closed under taking faces.
pub fn betti_numbers(complex: &CellComplex, included: &[bool]) -> (usize, usize, usize) {
    let mut counts = [0usize; 3];
    for c in complex.cells() {
        if included[c.index()] {
            counts[complex.dim(c) as usize] += 1;
            debug_assert!(
                complex.facets(c).iter().all(|s| included[s.index()]),
                "included set must be a subcomplex"
            );
        }
    }
    let mut rank = [0usize; 3];
    for d in [1u8, 2u8] {
        let mut space = ColumnSpace::new(complex.len());
        for c in complex.cells_of_dim(d) {
            if included[c.index()] {
                let col = space.column(z2_facets(complex, c).into_iter());
                if space.insert(col) {
                    rank[d as usize] += 1;
                }
            }
        }
    }
    let b0 = counts[0] - rank[1];
    let b1 = counts[1] - rank[1] - rank[2];
    let b2 = counts[2] - rank[2];
    (b0, b1, b2)
}

/// Betti numbers of every order-subcomplex prefix, one triple per rank.
///
/// Computed incrementally: cells are inserted in carrier-entry order and
/// the boundary ranks grow column by column.
pub fn betti_profile(complex: &CellComplex, order: &TotalOrder) -> Vec<(u32, usize, usize, usize)> {
    let entry = entry_times(complex, order);
    let n = complex.len();
    let mut cells: Vec<CellId> = complex.cells().collect();
    cells.sort_by_key(|c| (entry[c.index()], complex.dim(*c), order.rank(*c)));

    let mut space1 = ColumnSpace::new(n);
    let mut space2 = ColumnSpace::new(n);
    let mut counts = [0usize; 3];
    let mut rank = [0usize; 3];
    let mut out = Vec::with_capacity(n);
    let mut next = 0usize;
    for r in 0..n as u32 {
        while next < n && entry[cells[next].index()] <= r {
            let c = cells[next];
            next += 1;
            let d = complex.dim(c);
            counts[d as usize] += 1;
            if d > 0 {
                let space = if d == 1 { &mut space1 } else { &mut space2 };
                let col = space.column(z2_facets(complex, c).into_iter());
                if space.insert(col) {
                    rank[d as usize] += 1;
                }
            }
        }
        out.push((
            r,
            counts[0] - rank[1],
            counts[1] - rank[1] - rank[2],
            counts[2] - rank[2],
        ));
    }
    out
}
