//! Persistence by plain boundary-matrix reduction over the two-element
//! field, used as ground truth against the Kruskal sweeps.

use plateau::complex::{CellComplex, CellId};
use plateau::function::CellFunction;
use plateau::morse::TotalOrder;
use plateau::persistence::{DimPair, PersistenceRecord};

/// When a cell enters the filtration of order subcomplexes: its own rank,
/// or the rank of the earliest cell whose carrier pulls it in.
pub(crate) fn entry_times(complex: &CellComplex, order: &TotalOrder) -> Vec<u32> {
    let mut entry: Vec<u32> = complex.cells().map(|c| order.rank(c)).collect();
    for d in [2u8, 1u8] {
        for c in complex.cells_of_dim(d) {
            for s in complex.facets(c) {
                if entry[c.index()] < entry[s.index()] {
                    entry[s.index()] = entry[c.index()];
                }
            }
        }
    }
    entry
}

fn xor_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Z2 boundary columns in filtration order.
pub struct BoundaryMatrix {
    /// Cell at each column position.
    pub cells: Vec<CellId>,
    /// Entry time of each column position.
    pub entries: Vec<u32>,
    /// Facet positions of each cell, reduced mod 2, ascending.
    pub columns: Vec<Vec<u32>>,
}

impl BoundaryMatrix {
    pub fn new(complex: &CellComplex, order: &TotalOrder) -> Self {
        let entry = entry_times(complex, order);
        let mut cells: Vec<CellId> = complex.cells().collect();
        // Cells entering together are ordered faces-first so every prefix
        // is a subcomplex.
        cells.sort_by_key(|c| (entry[c.index()], complex.dim(*c), order.rank(*c)));
        let mut position = vec![0u32; complex.len()];
        for (p, c) in cells.iter().enumerate() {
            position[c.index()] = p as u32;
        }
        let columns = cells
            .iter()
            .map(|c| {
                let mut col: Vec<u32> =
                    complex.facets(*c).iter().map(|s| position[s.index()]).collect();
                col.sort_unstable();
                // Repeated facets cancel over the two-element field.
                let mut out = Vec::with_capacity(col.len());
                let mut k = 0;
                while k < col.len() {
                    let mut run = 1;
                    while k + run < col.len() && col[k + run] == col[k] {
                        run += 1;
                    }
                    if run % 2 == 1 {
                        out.push(col[k]);
                    }
                    k += run;
                }
                out
            })
            .collect();
        let entries = cells.iter().map(|c| entry[c.index()]).collect();
        BoundaryMatrix {
            cells,
            entries,
            columns,
        }
    }
}

/// Standard left-to-right column reduction; lowest-one pairings are the
/// persistence pairs, unpaired cells with zero reduced boundary are
/// essential. Pairs whose cells enter the filtration at the same time are
/// not homology events and are dropped.
pub fn reduce_persistence(
    complex: &CellComplex,
    f: &CellFunction,
    order: &TotalOrder,
) -> Vec<PersistenceRecord> {
    let matrix = BoundaryMatrix::new(complex, order);
    let n = matrix.cells.len();
    let mut low_owner: Vec<Option<usize>> = vec![None; n];
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = matrix.columns[j].clone();
        while let Some(&low) = col.last() {
            match low_owner[low as usize] {
                None => {
                    low_owner[low as usize] = Some(j);
                    break;
                }
                Some(k) => col = xor_columns(&col, &reduced[k]),
            }
        }
        reduced.push(col);
    }

    let mut paired = vec![false; n];
    let mut records = Vec::new();
    for j in 0..n {
        if let Some(&low) = reduced[j].last() {
            let i = low as usize;
            paired[i] = true;
            paired[j] = true;
            if matrix.entries[i] == matrix.entries[j] {
                continue;
            }
            let positive = matrix.cells[i];
            let negative = matrix.cells[j];
            let dim_pair = match complex.dim(positive) {
                0 => DimPair::ZeroOne,
                _ => DimPair::OneTwo,
            };
            records.push(PersistenceRecord {
                positive,
                negative: Some(negative),
                birth: f.value(positive),
                death: f.value(negative),
                dim_pair,
            });
        }
    }
    for p in 0..n {
        if !paired[p] && reduced[p].is_empty() {
            let cell = matrix.cells[p];
            records.push(PersistenceRecord {
                positive: cell,
                negative: None,
                birth: f.value(cell),
                death: f64::INFINITY,
                dim_pair: DimPair::Essential(complex.dim(cell)),
            });
        }
    }
    records
}
