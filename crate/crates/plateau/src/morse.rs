//! Discrete gradient vector fields, consistent total orders, and Forman
//! cancelation.
//!
//! A gradient field is a matching on facet-incident cell pairs with no
//! closed V-path. Together with a function it induces the partial orders
//! that drive every later stage: the Hasse diagram of the induced order is
//! the one graph all traversals run on, with the edges of matched pairs
//! inverted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::collections::VecDeque;

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::function::CellFunction;

/// A matching on facet-incidence pairs; unmatched cells are critical.
///
/// Stored as one partner id per cell with a sentinel for critical cells,
/// which keeps the array at four bytes per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientField {
    partner: Vec<u32>,
}

const UNMATCHED: u32 = u32::MAX;

impl GradientField {
    pub fn empty(n: usize) -> Self {
        assert!(n < UNMATCHED as usize);
        GradientField {
            partner: vec![UNMATCHED; n],
        }
    }

    /// Builds a field from `(facet, cofacet)` pairs, checking the matching
    /// and incidence conditions. Acyclicity is not checked here; see
    /// [`HasseDiagram::is_acyclic`].
    pub fn from_pairs(complex: &CellComplex, pairs: &[(CellId, CellId)]) -> Result<Self> {
        let mut field = GradientField::empty(complex.len());
        for &(sigma, tau) in pairs {
            if !complex.facets(tau).contains(&sigma) {
                return Err(Error::InvalidComplex("pair is not facet-incident"));
            }
            if !field.is_critical(sigma) || !field.is_critical(tau) {
                return Err(Error::InvalidComplex("cell contained in two pairs"));
            }
            field.partner[sigma.index()] = tau.0;
            field.partner[tau.index()] = sigma.0;
        }
        Ok(field)
    }

    #[inline]
    pub fn partner(&self, c: CellId) -> Option<CellId> {
        let p = self.partner[c.index()];
        (p != UNMATCHED).then_some(CellId(p))
    }

    /// Partner id with `u32::MAX` standing for "critical".
    #[inline]
    pub(crate) fn partner_raw(&self, c: CellId) -> u32 {
        self.partner[c.index()]
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.partner
    }

    #[inline]
    pub fn is_critical(&self, c: CellId) -> bool {
        self.partner[c.index()] == UNMATCHED
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn pair_count(&self) -> usize {
        self.partner.iter().filter(|p| **p != UNMATCHED).count() / 2
    }

    /// The pairs `(sigma, tau)` with `sigma` a facet of `tau`, by facet id.
    pub fn pairs(&self, complex: &CellComplex) -> Vec<(CellId, CellId)> {
        let mut out = Vec::with_capacity(self.pair_count());
        for (i, p) in self.partner.iter().enumerate() {
            if *p != UNMATCHED {
                let (c, tau) = (CellId(i as u32), CellId(*p));
                if complex.dim(c) < complex.dim(tau) {
                    out.push((c, tau));
                }
            }
        }
        out
    }

    /// All unmatched cells with their dimension (the Morse index).
    pub fn critical_cells(&self, complex: &CellComplex) -> Vec<(CellId, u8)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == UNMATCHED)
            .map(|(i, _)| (CellId(i as u32), complex.dim(CellId(i as u32))))
            .collect()
    }

    /// Serializes the matching as one `sigma tau` line per pair.
    pub fn write_pairs<W: std::io::Write>(
        &self,
        complex: &CellComplex,
        mut w: W,
    ) -> std::io::Result<()> {
        for (sigma, tau) in self.pairs(complex) {
            writeln!(w, "{sigma}\t{tau}")?;
        }
        Ok(())
    }

    pub fn read_pairs(complex: &CellComplex, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<CellId> {
                s.and_then(|s| s.parse::<u32>().ok())
                    .map(CellId)
                    .ok_or(Error::InvalidComplex("malformed gradient pair line"))
            };
            pairs.push((parse(it.next())?, parse(it.next())?));
        }
        Self::from_pairs(complex, &pairs)
    }

    pub(crate) fn set_pair(&mut self, a: CellId, b: CellId) {
        self.matched(a, b);
    }

    fn unmatch(&mut self, a: CellId, b: CellId) {
        debug_assert_eq!(self.partner[a.index()], b.0);
        self.partner[a.index()] = UNMATCHED;
        self.partner[b.index()] = UNMATCHED;
    }

    fn matched(&mut self, a: CellId, b: CellId) {
        debug_assert!(self.is_critical(a));
        debug_assert!(self.is_critical(b));
        self.partner[a.index()] = b.0;
        self.partner[b.index()] = a.0;
    }
}

/// True iff `f` is a pseudo-Morse function consistent with `field`:
/// unmatched facet pairs weakly increase, matched pairs weakly decrease.
pub fn check_consistency(complex: &CellComplex, f: &CellFunction, field: &GradientField) -> bool {
    for tau in complex.cells() {
        for &sigma in complex.facets(tau) {
            let matched = field.partner(sigma) == Some(tau);
            if matched {
                if f.value(sigma) < f.value(tau) {
                    return false;
                }
            } else if f.value(sigma) > f.value(tau) {
                return false;
            }
        }
    }
    true
}

/// Extends values on 0-cells to all cells by taking the maximum over
/// facets; the result is consistent with the empty field.
pub fn extend_from_vertices(complex: &CellComplex, vertex_values: &[f64]) -> Result<CellFunction> {
    let vertices: Vec<CellId> = complex.cells_of_dim(0).collect();
    if vertex_values.len() < vertices.len() {
        return Err(Error::MissingVertexValue(vertices[vertex_values.len()]));
    }
    if vertex_values.len() > vertices.len() {
        return Err(Error::InvalidComplex("more vertex values than 0-cells"));
    }
    if vertex_values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidComplex("NaN vertex value"));
    }
    let mut values = vec![0.0f64; complex.len()];
    for (v, x) in vertices.iter().zip(vertex_values) {
        values[v.index()] = *x;
    }
    for d in 1..=2u8 {
        for c in complex.cells_of_dim(d) {
            let m = complex
                .facets(c)
                .iter()
                .map(|s| values[s.index()])
                .fold(f64::NEG_INFINITY, f64::max);
            if m == f64::NEG_INFINITY {
                return Err(Error::InvalidComplex("cell without facets"));
            }
            values[c.index()] = m;
        }
    }
    Ok(CellFunction::new(values))
}

/// Extends values on 2-cells downward by taking the minimum over cofacets;
/// the result is consistent with the empty field.
pub fn extend_from_top_cells(complex: &CellComplex, cell2_values: &[f64]) -> Result<CellFunction> {
    let tops: Vec<CellId> = complex.cells_of_dim(2).collect();
    if cell2_values.len() < tops.len() {
        return Err(Error::MissingCellValue(tops[cell2_values.len()]));
    }
    if cell2_values.len() > tops.len() {
        return Err(Error::InvalidComplex("more values than 2-cells"));
    }
    if cell2_values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidComplex("NaN cell value"));
    }
    let mut values = vec![0.0f64; complex.len()];
    for (t, x) in tops.iter().zip(cell2_values) {
        values[t.index()] = *x;
    }
    for d in [1u8, 0u8] {
        for c in complex.cells_of_dim(d) {
            let m = complex
                .cofacets(c)
                .iter()
                .map(|s| values[s.index()])
                .fold(f64::INFINITY, f64::min);
            if m == f64::INFINITY {
                return Err(Error::InvalidComplex("cell without cofacets"));
            }
            values[c.index()] = m;
        }
    }
    Ok(CellFunction::new(values))
}

/// The Hasse diagram of the partial order induced by a gradient field: the
/// face-lattice diagram with the edge of every matched pair inverted.
///
/// `below(x)` lists the cells covered by `x` (weakly smaller under any
/// consistent function); `above(x)` the covering cells.
#[derive(Clone, Debug)]
pub struct HasseDiagram {
    below_offsets: Vec<u32>,
    below: Vec<CellId>,
    above_offsets: Vec<u32>,
    above: Vec<CellId>,
}

impl HasseDiagram {
    pub fn new(complex: &CellComplex, field: &GradientField) -> Self {
        // Two passes straight into compressed rows; at millions of cells
        // per-cell row vectors dominate the runtime of the whole stage.
        let n = complex.len();
        let mut below_count = vec![0u32; n + 1];
        let mut above_count = vec![0u32; n + 1];
        for tau in complex.cells() {
            for &sigma in complex.facets(tau) {
                if field.partner(sigma) == Some(tau) {
                    below_count[sigma.index() + 1] += 1;
                    above_count[tau.index() + 1] += 1;
                } else {
                    below_count[tau.index() + 1] += 1;
                    above_count[sigma.index() + 1] += 1;
                }
            }
        }
        for i in 0..n {
            below_count[i + 1] += below_count[i];
            above_count[i + 1] += above_count[i];
        }
        let below_offsets = below_count.clone();
        let above_offsets = above_count.clone();
        let mut below_fill = below_count;
        let mut above_fill = above_count;
        let total = below_offsets[n] as usize;
        let mut below = vec![CellId(0); total];
        let mut above = vec![CellId(0); total];
        for tau in complex.cells() {
            for &sigma in complex.facets(tau) {
                let (src, dst) = if field.partner(sigma) == Some(tau) {
                    (sigma, tau)
                } else {
                    (tau, sigma)
                };
                below[below_fill[src.index()] as usize] = dst;
                below_fill[src.index()] += 1;
                above[above_fill[dst.index()] as usize] = src;
                above_fill[dst.index()] += 1;
            }
        }
        HasseDiagram {
            below_offsets,
            below,
            above_offsets,
            above,
        }
    }

    pub fn len(&self) -> usize {
        self.below_offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn below(&self, c: CellId) -> &[CellId] {
        let i = c.index();
        &self.below[self.below_offsets[i] as usize..self.below_offsets[i + 1] as usize]
    }

    #[inline]
    pub fn above(&self, c: CellId) -> &[CellId] {
        let i = c.index();
        &self.above[self.above_offsets[i] as usize..self.above_offsets[i + 1] as usize]
    }

    /// True iff the diagram is a DAG, i.e. the field is a gradient field.
    pub fn is_acyclic(&self) -> bool {
        let n = self.len();
        let mut indegree: Vec<u32> = (0..n)
            .map(|i| self.below_offsets[i + 1] - self.below_offsets[i])
            .collect();
        let mut queue: VecDeque<CellId> = (0..n as u32)
            .map(CellId)
            .filter(|c| indegree[c.index()] == 0)
            .collect();
        let mut seen = 0usize;
        while let Some(c) = queue.pop_front() {
            seen += 1;
            for &a in self.above(c) {
                indegree[a.index()] -= 1;
                if indegree[a.index()] == 0 {
                    queue.push_back(a);
                }
            }
        }
        seen == n
    }

    /// Cells weakly below `start` in the induced order (the repelling set).
    pub fn reachable_below(&self, start: CellId) -> Vec<bool> {
        self.reach(start, true)
    }

    /// Cells weakly above `start` in the induced order (the attracting set).
    pub fn reachable_above(&self, start: CellId) -> Vec<bool> {
        self.reach(start, false)
    }

    fn reach(&self, start: CellId, down: bool) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[start.index()] = true;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            let next = if down { self.below(c) } else { self.above(c) };
            for &x in next {
                if !seen[x.index()] {
                    seen[x.index()] = true;
                    stack.push(x);
                }
            }
        }
        seen
    }
}

/// Builds the Hasse diagram of the order induced by `field`.
pub fn induced_hasse_diagram(complex: &CellComplex, field: &GradientField) -> HasseDiagram {
    HasseDiagram::new(complex, field)
}

/// A permutation of all cells, used as the symbolic perturbation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalOrder {
    rank: Vec<u32>,
    by_rank: Vec<CellId>,
}

impl TotalOrder {
    #[inline]
    pub fn rank(&self, c: CellId) -> u32 {
        self.rank[c.index()]
    }

    #[inline]
    pub fn cell_at(&self, rank: u32) -> CellId {
        self.by_rank[rank as usize]
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn iter_by_rank(&self) -> impl Iterator<Item = CellId> + '_ {
        self.by_rank.iter().copied()
    }

    fn from_by_rank(by_rank: Vec<CellId>) -> Self {
        let mut rank = vec![0u32; by_rank.len()];
        for (r, c) in by_rank.iter().enumerate() {
            rank[c.index()] = r as u32;
        }
        TotalOrder { rank, by_rank }
    }
}

#[derive(PartialEq)]
struct OrderKey {
    value: f64,
    dim: u8,
    id: u32,
}

impl Eq for OrderKey {}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.dim.cmp(&other.dim))
            .then(self.id.cmp(&other.id))
    }
}

/// Builds a strict total order consistent with `(f, field)`: a linear
/// extension of both the value order and the field-induced partial order,
/// with ties broken by `(dimension, id)`.
///
/// For the empty field this is exactly the `(value, dimension, id)`
/// lexicographic order.
pub fn build_total_order(
    complex: &CellComplex,
    f: &CellFunction,
    field: &GradientField,
) -> Result<TotalOrder> {
    if f.len() != complex.len() || field.len() != complex.len() {
        return Err(Error::InvalidComplex("function or field size mismatch"));
    }
    if !check_consistency(complex, f, field) {
        return Err(Error::InconsistentInput);
    }
    let key = |c: CellId| OrderKey {
        value: f.value(c),
        dim: complex.dim(c),
        id: c.0,
    };
    if field.pair_count() == 0 {
        let mut by_rank: Vec<CellId> = complex.cells().collect();
        by_rank.sort_unstable_by_key(|a| key(*a));
        return Ok(TotalOrder::from_by_rank(by_rank));
    }
    // Greedy topological sort of the induced order, always emitting the
    // smallest available (value, dim, id) key. Because any cell below
    // another in the induced order also has a weakly smaller value, the
    // emitted sequence is sorted by value.
    let hasse = HasseDiagram::new(complex, field);
    let n = complex.len();
    let mut pending: Vec<u32> = (0..n)
        .map(|i| hasse.below(CellId(i as u32)).len() as u32)
        .collect();
    let mut heap: BinaryHeap<std::cmp::Reverse<(OrderKey, CellId)>> = (0..n as u32)
        .map(CellId)
        .filter(|c| pending[c.index()] == 0)
        .map(|c| std::cmp::Reverse((key(c), c)))
        .collect();
    let mut by_rank = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse((_, c))) = heap.pop() {
        by_rank.push(c);
        for &a in hasse.above(c) {
            pending[a.index()] -= 1;
            if pending[a.index()] == 0 {
                heap.push(std::cmp::Reverse((key(a), a)));
            }
        }
    }
    if by_rank.len() != n {
        return Err(Error::CycleDetected);
    }
    Ok(TotalOrder::from_by_rank(by_rank))
}

/// An alternating V-path `(sigma_0, tau_0, sigma_1, ..., sigma_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPath {
    pub cells: Vec<CellId>,
    /// Whether the path terminates at a critical cell of its dimension.
    pub ends_at_critical: bool,
}

impl VPath {
    pub fn start(&self) -> CellId {
        self.cells[0]
    }

    pub fn end(&self) -> CellId {
        *self.cells.last().unwrap()
    }

    /// Number of matched pairs traversed.
    pub fn steps(&self) -> usize {
        self.cells.len() / 2
    }
}

/// Sides of the descending trace: the primal 1-skeleton walks 0-cells, the
/// dual walks 2-cells.
#[derive(Clone, Copy, PartialEq, Eq)]
enum TraceSide {
    Primal,
    Dual,
}

impl TraceSide {
    fn endpoints<'a>(&self, complex: &'a CellComplex, e: CellId) -> &'a [CellId] {
        match self {
            TraceSide::Primal => complex.facets(e),
            TraceSide::Dual => complex.cofacets(e),
        }
    }
}

/// Follows the unique maximal V-path from a vertex-like cell downward.
fn trace_descending(
    complex: &CellComplex,
    field: &GradientField,
    start: CellId,
    side: TraceSide,
) -> Result<VPath> {
    let mut cells = vec![start];
    let mut current = start;
    let limit = complex.len() + 1;
    loop {
        if cells.len() > limit {
            return Err(Error::CycleDetected);
        }
        let edge = match field.partner(current) {
            None => return Ok(VPath {
                cells,
                ends_at_critical: true,
            }),
            Some(e) => e,
        };
        let ends = side.endpoints(complex, edge);
        let next = match ends.iter().find(|v| **v != current) {
            Some(v) => *v,
            // A dual walk can run into the boundary of an uncapped surface.
            None => {
                cells.push(edge);
                return Ok(VPath {
                    cells,
                    ends_at_critical: false,
                });
            }
        };
        cells.push(edge);
        cells.push(next);
        current = next;
    }
}

/// Enumerates V-paths issuing from a critical cell.
///
/// For a critical 1-cell the two descending paths from its boundary
/// 0-cells are returned; on a surface these never branch. For a critical
/// 2-cell the paths of dimension 1 from its boundary to critical 1-cells
/// are enumerated by a forward search (these may branch at 2-cells but
/// never merge on a surface).
pub fn trace_vpaths_from(
    complex: &CellComplex,
    field: &GradientField,
    cell: CellId,
) -> Result<Vec<VPath>> {
    if !field.is_critical(cell) {
        return Err(Error::NotCritical(cell));
    }
    match complex.dim(cell) {
        1 => {
            let mut out = Vec::new();
            let mut seen_starts: Vec<CellId> = Vec::new();
            for &v in complex.facets(cell) {
                if seen_starts.contains(&v) {
                    continue;
                }
                seen_starts.push(v);
                out.push(trace_descending(complex, field, v, TraceSide::Primal)?);
            }
            Ok(out)
        }
        2 => trace_paths_from_2cell(complex, field, cell),
        d => Err(Error::WrongDimension { cell, dim: d }),
    }
}

fn trace_paths_from_2cell(
    complex: &CellComplex,
    field: &GradientField,
    cell: CellId,
) -> Result<Vec<VPath>> {
    // Arena-backed iterative DFS; paths are reconstructed from parent links.
    struct Node {
        cell: CellId,
        parent: Option<usize>,
    }
    let mut arena: Vec<Node> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut visited = vec![false; complex.len()];
    let mut out = Vec::new();
    for &phi in complex.facets(cell) {
        arena.push(Node {
            cell: phi,
            parent: None,
        });
        stack.push(arena.len() - 1);
    }
    while let Some(node) = stack.pop() {
        let phi = arena[node].cell;
        match field.partner(phi) {
            None => {
                // Terminates at a critical 1-cell; emit the path.
                let mut cells = Vec::new();
                let mut at = Some(node);
                while let Some(i) = at {
                    cells.push(arena[i].cell);
                    at = arena[i].parent;
                }
                cells.reverse();
                out.push(VPath {
                    cells,
                    ends_at_critical: true,
                });
            }
            Some(rho) if complex.dim(rho) == 2 => {
                // Paths of dimension 1 never merge on a surface, so an
                // interior revisit means the field is not a gradient field.
                if visited[rho.index()] {
                    return Err(Error::CycleDetected);
                }
                visited[rho.index()] = true;
                arena.push(Node {
                    cell: rho,
                    parent: Some(node),
                });
                let rho_node = arena.len() - 1;
                for &next in complex.facets(rho) {
                    if next == phi {
                        continue;
                    }
                    arena.push(Node {
                        cell: next,
                        parent: Some(rho_node),
                    });
                    stack.push(arena.len() - 1);
                }
            }
            // Matched downward to a 0-cell: no dimension-1 continuation.
            Some(_) => {}
        }
    }
    Ok(out)
}

/// Reverses the field along the unique V-path from the boundary of `tau`
/// to `sigma`, removing both cells from the critical set.
pub fn cancel_pair(
    complex: &CellComplex,
    field: &GradientField,
    sigma: CellId,
    tau: CellId,
) -> Result<GradientField> {
    if !field.is_critical(sigma) {
        return Err(Error::NotCritical(sigma));
    }
    if !field.is_critical(tau) {
        return Err(Error::NotCritical(tau));
    }
    let (ds, dt) = (complex.dim(sigma), complex.dim(tau));
    if dt != ds + 1 {
        return Err(Error::WrongDimension {
            cell: tau,
            dim: dt,
        });
    }
    // Both dimension pairs reduce to descending traces from the side where
    // paths cannot branch: from the 1-cell of the pair.
    let (side, starts, target) = match ds {
        0 => (TraceSide::Primal, complex.facets(tau), sigma),
        1 => (TraceSide::Dual, complex.cofacets(sigma), tau),
        _ => {
            return Err(Error::WrongDimension {
                cell: sigma,
                dim: ds,
            })
        }
    };
    let mut hits: Vec<VPath> = Vec::new();
    let mut seen_starts: Vec<CellId> = Vec::new();
    for &s in starts {
        if seen_starts.contains(&s) {
            continue;
        }
        seen_starts.push(s);
        let path = trace_descending(complex, field, s, side)?;
        if path.ends_at_critical && path.end() == target {
            hits.push(path);
        }
    }
    if hits.len() != 1 {
        return Err(Error::NonUniquePath { found: hits.len() });
    }
    let path = hits.pop().unwrap();
    let mut new_field = field.clone();
    let cells = &path.cells;
    let steps = path.steps();
    for i in 0..steps {
        new_field.unmatch(cells[2 * i], cells[2 * i + 1]);
    }
    match ds {
        0 => {
            // Path (v_0, e_0, ..., v_r = sigma): pair v_0 with tau, then
            // each later vertex with the preceding edge.
            new_field.matched(cells[0], tau);
            for i in 0..steps {
                new_field.matched(cells[2 * i + 2], cells[2 * i + 1]);
            }
        }
        _ => {
            // Dual path (R_0, e_0, ..., R_r = tau): pair sigma with R_0,
            // then each edge with the following 2-cell.
            new_field.matched(sigma, cells[0]);
            for i in 0..steps {
                new_field.matched(cells[2 * i + 1], cells[2 * i + 2]);
            }
        }
    }
    Ok(new_field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tetrahedron_boundary;

    fn triangle() -> CellComplex {
        CellComplex::from_triangle_mesh(3, &[[0, 1, 2]]).unwrap()
    }

    /// Two triangles sharing edge (1,2); ids: vertices 0..=3, edges
    /// e01=4, e12=5, e02=6, e23=7, e13=8, faces T012=9, T123=10.
    fn two_triangles() -> CellComplex {
        CellComplex::from_triangle_mesh(4, &[[0, 1, 2], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn extend_from_vertices_on_triangle() {
        let complex = triangle();
        let f = extend_from_vertices(&complex, &[0.0, 1.0, 2.0]).unwrap();
        // Edges (0,1), (1,2), (0,2) then the face.
        assert_eq!(f.value(CellId(3)), 1.0);
        assert_eq!(f.value(CellId(4)), 2.0);
        assert_eq!(f.value(CellId(5)), 2.0);
        assert_eq!(f.value(CellId(6)), 2.0);
        assert!(check_consistency(
            &complex,
            &f,
            &GradientField::empty(complex.len())
        ));
    }

    #[test]
    fn extend_constant_is_constant() {
        let complex = tetrahedron_boundary();
        let f = extend_from_vertices(&complex, &[5.0; 4]).unwrap();
        assert!(f.values().iter().all(|v| *v == 5.0));
    }

    #[test]
    fn extend_from_vertices_on_tetrahedron() {
        let complex = tetrahedron_boundary();
        let f = extend_from_vertices(&complex, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        // Faces in construction order: (0,1,2), (0,1,3), (0,2,3), (1,2,3).
        let faces: Vec<CellId> = complex.cells_of_dim(2).collect();
        let values: Vec<f64> = faces.iter().map(|c| f.value(*c)).collect();
        assert_eq!(values, vec![2.0, 3.0, 3.0, 3.0]);
    }

    #[test]
    fn extend_from_top_cells_on_grids() {
        let complex = CellComplex::from_pixel_grid(2, 1).unwrap();
        let f = extend_from_top_cells(&complex, &[3.0, 7.0]).unwrap();
        // The shared edge between the two pixels is the middle horizontal
        // edge hedge(1, 0); vertices occupy ids 0..6, then 3 h-edges.
        let shared = CellId(6 + 1);
        assert_eq!(complex.cofacets(shared).len(), 2);
        assert_eq!(f.value(shared), 3.0);

        let complex = CellComplex::from_pixel_grid(2, 2).unwrap();
        let f = extend_from_top_cells(&complex, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let center = CellId(4); // vertex (1,1) with vstride 3
        assert_eq!(complex.cofacets(center).len(), 4);
        assert_eq!(f.value(center), 1.0);
    }

    #[test]
    fn missing_values_are_reported() {
        let complex = triangle();
        assert!(matches!(
            extend_from_vertices(&complex, &[0.0, 1.0]),
            Err(Error::MissingVertexValue(_))
        ));
    }

    #[test]
    fn consistency_examples() {
        let complex = triangle();
        let f = CellFunction::constant(complex.len(), 2.0);
        let field = GradientField::from_pairs(&complex, &[(CellId(0), CellId(3))]).unwrap();
        assert!(check_consistency(&complex, &f, &field));

        // f(sigma)=0, f(tau)=1 on a matched pair violates consistency.
        let mut f = CellFunction::constant(complex.len(), 1.0);
        f.set(CellId(0), 0.0);
        assert!(!check_consistency(&complex, &f, &field));
        assert!(matches!(
            build_total_order(&complex, &f, &field),
            Err(Error::InconsistentInput)
        ));
    }

    #[test]
    fn total_order_constant_function_sorts_by_dimension() {
        let complex = triangle();
        let f = CellFunction::constant(complex.len(), 0.0);
        let order =
            build_total_order(&complex, &f, &GradientField::empty(complex.len())).unwrap();
        let ranks: Vec<u32> = complex.cells().map(|c| order.rank(c)).collect();
        assert_eq!(ranks, vec![0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn total_order_injective_values_sort_by_value() {
        let complex = triangle();
        let values = [0.25, 0.5, 0.125];
        let f = extend_from_vertices(&complex, &values).unwrap();
        let order =
            build_total_order(&complex, &f, &GradientField::empty(complex.len())).unwrap();
        let mut last = f64::NEG_INFINITY;
        for c in order.iter_by_rank() {
            assert!(f.value(c) >= last);
            last = f.value(c);
        }
    }

    #[test]
    fn total_order_extends_induced_order_with_pairs() {
        let complex = two_triangles();
        let f = CellFunction::constant(complex.len(), 1.0);
        let field = GradientField::from_pairs(
            &complex,
            &[(CellId(5), CellId(9)), (CellId(2), CellId(6))],
        )
        .unwrap();
        let order = build_total_order(&complex, &f, &field).unwrap();
        let hasse = HasseDiagram::new(&complex, &field);
        for c in complex.cells() {
            for &b in hasse.below(c) {
                assert!(order.rank(b) < order.rank(c), "below must precede");
            }
        }
    }

    #[test]
    fn hasse_of_empty_field_is_face_lattice() {
        let complex = triangle();
        let hasse = HasseDiagram::new(&complex, &GradientField::empty(complex.len()));
        assert_eq!(hasse.below(CellId(6)).len(), 3);
        assert_eq!(hasse.above(CellId(0)).len(), 2);
        assert!(hasse.is_acyclic());
    }

    #[test]
    fn hasse_inverts_matched_edges() {
        let complex = triangle();
        let field = GradientField::from_pairs(&complex, &[(CellId(0), CellId(3))]).unwrap();
        let hasse = HasseDiagram::new(&complex, &field);
        assert!(hasse.below(CellId(0)).contains(&CellId(3)));
        assert!(!hasse.below(CellId(3)).contains(&CellId(0)));
        assert!(hasse.is_acyclic());
    }

    #[test]
    fn circular_matching_is_detected_as_cyclic() {
        // Square boundary: vertices 0..4, edges (0,1), (1,2), (2,3), (0,3).
        let dims = vec![0, 0, 0, 0, 1, 1, 1, 1];
        let rows = vec![
            vec![],
            vec![],
            vec![],
            vec![],
            vec![CellId(0), CellId(1)],
            vec![CellId(1), CellId(2)],
            vec![CellId(2), CellId(3)],
            vec![CellId(0), CellId(3)],
        ];
        let complex = CellComplex::from_cell_lists(dims, rows).unwrap();
        let field = GradientField::from_pairs(
            &complex,
            &[
                (CellId(0), CellId(4)),
                (CellId(1), CellId(5)),
                (CellId(2), CellId(6)),
                (CellId(3), CellId(7)),
            ],
        )
        .unwrap();
        let hasse = HasseDiagram::new(&complex, &field);
        assert!(!hasse.is_acyclic());
    }

    #[test]
    fn trace_trivial_path_to_adjacent_critical_vertex() {
        let complex = triangle();
        let field = GradientField::empty(complex.len());
        let paths = trace_vpaths_from(&complex, &field, CellId(3)).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.cells.len() == 1 && p.ends_at_critical));
    }

    #[test]
    fn trace_and_cancel_through_a_chain() {
        let complex = two_triangles();
        // (e12, T012) and (v2, e02) matched; T123 and e01 critical.
        let field = GradientField::from_pairs(
            &complex,
            &[(CellId(5), CellId(9)), (CellId(2), CellId(6))],
        )
        .unwrap();
        let paths = trace_vpaths_from(&complex, &field, CellId(10)).unwrap();
        assert_eq!(paths.len(), 3);
        let to_e01: Vec<_> = paths.iter().filter(|p| p.end() == CellId(4)).collect();
        assert_eq!(to_e01.len(), 1);
        assert_eq!(to_e01[0].cells, vec![CellId(5), CellId(9), CellId(4)]);

        let canceled = cancel_pair(&complex, &field, CellId(4), CellId(10)).unwrap();
        assert_eq!(canceled.partner(CellId(4)), Some(CellId(9)));
        assert_eq!(canceled.partner(CellId(5)), Some(CellId(10)));
        assert!(!canceled.is_critical(CellId(6)));
        let before = field.critical_cells(&complex).len();
        let after = canceled.critical_cells(&complex).len();
        assert_eq!(after, before - 2);
        assert!(HasseDiagram::new(&complex, &canceled).is_acyclic());
    }

    #[test]
    fn cancel_adjacent_pair_adds_single_arrow() {
        let complex = two_triangles();
        let field = GradientField::from_pairs(
            &complex,
            &[(CellId(5), CellId(9)), (CellId(2), CellId(6))],
        )
        .unwrap();
        // e13 (id 8) is a critical facet of the critical T123 (id 10).
        let canceled = cancel_pair(&complex, &field, CellId(8), CellId(10)).unwrap();
        assert_eq!(canceled.partner(CellId(8)), Some(CellId(10)));
        assert_eq!(canceled.pair_count(), field.pair_count() + 1);
    }

    #[test]
    fn two_paths_to_the_same_minimum_block_cancelation() {
        // A circle of three vertices and three edges.
        let dims = vec![0, 0, 0, 1, 1, 1];
        let rows = vec![
            vec![],
            vec![],
            vec![],
            vec![CellId(0), CellId(1)],
            vec![CellId(1), CellId(2)],
            vec![CellId(0), CellId(2)],
        ];
        let complex = CellComplex::from_cell_lists(dims, rows).unwrap();
        let field = GradientField::from_pairs(
            &complex,
            &[(CellId(1), CellId(3)), (CellId(2), CellId(4))],
        )
        .unwrap();
        let paths = trace_vpaths_from(&complex, &field, CellId(5)).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.end() == CellId(0)));
        assert!(matches!(
            cancel_pair(&complex, &field, CellId(0), CellId(5)),
            Err(Error::NonUniquePath { found: 2 })
        ));
    }

    #[test]
    fn critical_cells_of_empty_field_is_everything() {
        let complex = triangle();
        let field = GradientField::empty(complex.len());
        assert_eq!(field.critical_cells(&complex).len(), complex.len());
    }

    #[test]
    fn gradient_pairs_round_trip_as_text() {
        let complex = two_triangles();
        let field = GradientField::from_pairs(
            &complex,
            &[(CellId(5), CellId(9)), (CellId(2), CellId(6))],
        )
        .unwrap();
        let mut text = Vec::new();
        field.write_pairs(&complex, &mut text).unwrap();
        let parsed = GradientField::read_pairs(&complex, &String::from_utf8(text).unwrap());
        assert_eq!(parsed.unwrap(), field);
    }
}
