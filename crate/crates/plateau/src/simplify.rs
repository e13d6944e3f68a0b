//! Construction of perfect delta-simplifications.
//!
//! The fast path extracts the simplified gradient field from the two
//! thresholded spanning forests by depth-first traversal and then builds
//! the output function in one topological-order pass over the induced
//! Hasse diagram. The slow path cancels persistence pairs one by one,
//! clamping values onto plateaus; it is quadratic and kept as a
//! correctness oracle for the fast path.

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::function::CellFunction;
use crate::morse::{
    build_total_order, cancel_pair, GradientField, HasseDiagram, TotalOrder,
};
use crate::persistence::{
    all_persistence_pairs, PersistenceRecord, SpanningForestResult,
};

/// Everything produced by one simplification run.
#[derive(Clone, Debug)]
pub struct SimplificationResult {
    pub v_delta: GradientField,
    pub f_min: CellFunction,
    pub f_max: CellFunction,
    pub f_mean: CellFunction,
    /// Records with persistence above the threshold, plus essential ones.
    pub surviving: Vec<PersistenceRecord>,
    /// Finite records at or below the threshold.
    pub canceled: Vec<PersistenceRecord>,
}

/// Builds the simplified gradient field from the two thresholded forests:
/// each component is traversed from its creator, and every edge reaching a
/// new vertex becomes a pair.
pub fn extract_gradient_field(
    primal: &SpanningForestResult,
    dual: &SpanningForestResult,
    complex: &CellComplex,
) -> Result<GradientField> {
    let mut field = GradientField::empty(complex.len());
    traverse_forest(complex, primal, false, &mut field)?;
    traverse_forest(complex, dual, true, &mut field)?;
    Ok(field)
}

/// Hints the cache that `p` is needed soon. The traversal orders of the
/// big passes are data dependent, so hardware prefetchers see random
/// access; hinting a few frontier entries ahead hides most of the DRAM
/// latency.
#[inline(always)]
fn prefetch<T>(p: *const T) {
    #[cfg(target_arch = "x86_64")]
    unsafe {
        core::arch::x86_64::_mm_prefetch(p as *const i8, core::arch::x86_64::_MM_HINT_T0);
    }
    #[cfg(target_arch = "aarch64")]
    unsafe {
        core::arch::asm!("prfm pldl1keep, [{0}]", in(reg) p as *const u8, options(nostack, preserves_flags));
    }
    #[cfg(not(any(target_arch = "x86_64", target_arch = "aarch64")))]
    let _ = p;
}

/// How far ahead of the traversal head to issue prefetches.
const PREFETCH_DISTANCE: usize = 12;

/// Compact bit array for the traversal masks.
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
}

fn traverse_forest(
    complex: &CellComplex,
    forest: &SpanningForestResult,
    dual: bool,
    field: &mut GradientField,
) -> Result<()> {
    // The forest is walked over the complex's own incidence rows, with a
    // membership mask instead of a separate adjacency structure.
    let n = complex.len();
    let mut in_forest = BitSet::new(n);
    for &e in &forest.m_delta_edges {
        in_forest.set(e.index());
    }
    let (vertex_offsets, vertex_targets) = if dual {
        complex.facet_store()
    } else {
        complex.cofacet_store()
    };
    let (edge_offsets, edge_targets) = if dual {
        complex.cofacet_store()
    } else {
        complex.facet_store()
    };
    let mut visited = BitSet::new(n);
    // Breadth-first: every vertex of a tree is reached through its unique
    // parent edge whatever the traversal, and the frontier stays spatially
    // coherent on grid-like complexes.
    let mut queue: Vec<CellId> = Vec::new();
    let mut edges_used = 0usize;
    for &root in &forest.m_delta_creators {
        if visited.get(root.index()) {
            return Err(Error::InternalInvariantViolation(
                "forest component with two creators",
            ));
        }
        visited.set(root.index());
        queue.push(root);
    }
    let mut head = 0usize;
    while head < queue.len() {
        if let Some(next) = queue.get(head + PREFETCH_DISTANCE) {
            prefetch(&vertex_offsets[next.index()]);
        }
        if let Some(next) = queue.get(head + PREFETCH_DISTANCE / 2) {
            let i = next.index();
            let row = vertex_offsets[i] as usize..vertex_offsets[i + 1] as usize;
            for &edge in &vertex_targets[row] {
                prefetch(&in_forest.words[edge.index() / 64]);
                prefetch(&edge_offsets[edge.index()]);
            }
        }
        let v = queue[head];
        head += 1;
        let row = vertex_offsets[v.index()] as usize..vertex_offsets[v.index() + 1] as usize;
        for &edge in &vertex_targets[row] {
            if !in_forest.get(edge.index()) {
                continue;
            }
            let ends = &edge_targets
                [edge_offsets[edge.index()] as usize..edge_offsets[edge.index() + 1] as usize];
            let Some(&w) = ends.iter().find(|w| **w != v) else {
                continue;
            };
            if visited.get(w.index()) {
                continue;
            }
            visited.set(w.index());
            edges_used += 1;
            let (facet, cofacet) = if dual { (edge, w) } else { (w, edge) };
            if field.partner(facet).is_some() || field.partner(cofacet).is_some() {
                return Err(Error::InternalInvariantViolation(
                    "cell matched twice during extraction",
                ));
            }
            field.set_pair(facet, cofacet);
            queue.push(w);
        }
    }
    if edges_used != forest.m_delta_edges.len() {
        return Err(Error::InternalInvariantViolation(
            "thresholded forest contains a cycle",
        ));
    }
    Ok(())
}

/// Number of cells directly below each cell in the induced order: the
/// unmatched facets, plus the matched cofacet when there is one. Virtual
/// caps can have thousands of facets, so the counters are full width.
fn below_counts(complex: &CellComplex, field: &GradientField) -> Vec<u32> {
    let mut pending = vec![0u32; complex.len()];
    for c in complex.cells() {
        let mut count = complex.facets(c).len() as u32;
        if let Some(p) = field.partner(c) {
            if complex.dim(p) < complex.dim(c) {
                count -= 1; // the matched facet sits above, not below
            } else {
                count += 1; // the matched cofacet sits below
            }
        }
        pending[c.index()] = count;
    }
    pending
}

/// One forward Kahn sweep over the induced order that simultaneously
/// evaluates the minimal solution, followed by a reverse sweep for the
/// maximal one.
fn extremal_solutions(
    complex: &CellComplex,
    field: &GradientField,
    f: &CellFunction,
    delta: f64,
) -> Result<(CellFunction, CellFunction)> {
    let n = complex.len();
    let (facet_offsets, facet_targets) = complex.facet_store();
    let (cofacet_offsets, cofacet_targets) = complex.cofacet_store();
    let partner_of = field.raw();
    let values = f.values();

    let mut pending = below_counts(complex, field);
    let mut order: Vec<CellId> = (0..n as u32)
        .map(CellId)
        .filter(|c| pending[c.index()] == 0)
        .collect();
    let mut low = vec![0.0f64; n];
    let mut head = 0usize;
    while head < order.len() {
        if let Some(c) = order.get(head + 2 * PREFETCH_DISTANCE) {
            let i = c.index();
            prefetch(&facet_offsets[i]);
            prefetch(&cofacet_offsets[i]);
            prefetch(&partner_of[i]);
            prefetch(&values[i]);
        }
        if let Some(c) = order.get(head + PREFETCH_DISTANCE) {
            let i = c.index();
            let fo = facet_offsets[i] as usize;
            if fo < facet_targets.len() {
                prefetch(&facet_targets[fo]);
            }
            let co = cofacet_offsets[i] as usize;
            if co < cofacet_targets.len() {
                prefetch(&cofacet_targets[co]);
            }
        }
        if let Some(c) = order.get(head + PREFETCH_DISTANCE / 3) {
            let i = c.index();
            for t in &facet_targets[facet_offsets[i] as usize..facet_offsets[i + 1] as usize] {
                prefetch(&low[t.index()]);
            }
            for t in
                &cofacet_targets[cofacet_offsets[i] as usize..cofacet_offsets[i + 1] as usize]
            {
                prefetch(&pending[t.index()]);
            }
        }
        let c = order[head];
        head += 1;
        let partner = field.partner_raw(c);
        let mut v = f.value(c) - delta;
        for &sigma in complex.facets(c) {
            if sigma.0 != partner {
                v = v.max(low[sigma.index()]);
            }
        }
        let mut release = |a: CellId, order: &mut Vec<CellId>| {
            pending[a.index()] -= 1;
            if pending[a.index()] == 0 {
                order.push(a);
            }
        };
        for &tau in complex.cofacets(c) {
            if tau.0 != partner {
                release(tau, &mut order);
            }
        }
        if partner != u32::MAX {
            let p = CellId(partner);
            if complex.dim(p) < complex.dim(c) {
                release(p, &mut order);
            } else {
                v = v.max(low[p.index()]);
            }
        }
        low[c.index()] = v;
    }
    if order.len() != n {
        return Err(Error::CycleDetected);
    }
    let mut high = vec![0.0f64; n];
    for (done, &c) in order.iter().rev().enumerate() {
        if done + 2 * PREFETCH_DISTANCE < n {
            let i = order[n - 1 - done - 2 * PREFETCH_DISTANCE].index();
            prefetch(&cofacet_offsets[i]);
            prefetch(&partner_of[i]);
            prefetch(&values[i]);
        }
        if done + PREFETCH_DISTANCE < n {
            let i = order[n - 1 - done - PREFETCH_DISTANCE].index();
            let co = cofacet_offsets[i] as usize;
            if co < cofacet_targets.len() {
                prefetch(&cofacet_targets[co]);
            }
        }
        if done + PREFETCH_DISTANCE / 3 < n {
            let i = order[n - 1 - done - PREFETCH_DISTANCE / 3].index();
            for t in
                &cofacet_targets[cofacet_offsets[i] as usize..cofacet_offsets[i + 1] as usize]
            {
                prefetch(&high[t.index()]);
            }
        }
        let partner = field.partner_raw(c);
        let mut v = f.value(c) + delta;
        for &tau in complex.cofacets(c) {
            if tau.0 != partner {
                v = v.min(high[tau.index()]);
            }
        }
        if partner != u32::MAX {
            let p = CellId(partner);
            if complex.dim(p) < complex.dim(c) {
                v = v.min(high[p.index()]);
            }
        }
        high[c.index()] = v;
    }
    Ok((CellFunction::new(low), CellFunction::new(high)))
}

/// Builds both extremal solutions over one topological order.
pub fn construct_bounds(
    complex: &CellComplex,
    f: &CellFunction,
    v_delta: &GradientField,
    delta: f64,
) -> Result<(CellFunction, CellFunction)> {
    extremal_solutions(complex, f_check(complex, v_delta)?, f, delta)
}

#[inline]
fn f_check<'a>(complex: &CellComplex, field: &'a GradientField) -> Result<&'a GradientField> {
    if field.len() != complex.len() {
        return Err(Error::InvalidComplex("field size mismatch"));
    }
    Ok(field)
}

/// The componentwise least function above `f - delta` consistent with the
/// field: visit cells in a linear extension of the induced order and take
/// the forced maximum.
pub fn construct_f_min(
    complex: &CellComplex,
    f: &CellFunction,
    v_delta: &GradientField,
    delta: f64,
) -> Result<CellFunction> {
    Ok(construct_bounds(complex, f, v_delta, delta)?.0)
}

/// The componentwise greatest function below `f + delta` consistent with
/// the field; the mirror image of [`construct_f_min`].
pub fn construct_f_max(
    complex: &CellComplex,
    f: &CellFunction,
    v_delta: &GradientField,
    delta: f64,
) -> Result<CellFunction> {
    Ok(construct_bounds(complex, f, v_delta, delta)?.1)
}

/// Componentwise arithmetic mean of the extremal solutions; feasible by
/// convexity of the solution polytope.
pub fn symmetrize(f_min: &CellFunction, f_max: &CellFunction) -> CellFunction {
    assert_eq!(f_min.len(), f_max.len());
    CellFunction::new(
        f_min
            .values()
            .iter()
            .zip(f_max.values())
            .map(|(a, b)| (a + b) / 2.0)
            .collect(),
    )
}

/// Runs the whole fast path on a closed complex with the empty input
/// field: order, both sweeps, field extraction, and the three output
/// functions.
pub fn perfect_simplification(
    complex: &CellComplex,
    f: &CellFunction,
    delta: f64,
) -> Result<SimplificationResult> {
    let empty = GradientField::empty(complex.len());
    let order = build_total_order(complex, f, &empty)?;
    let two_delta = 2.0 * delta;
    let (records, primal, dual) = all_persistence_pairs(complex, f, &order, two_delta)?;
    let v_delta = extract_gradient_field(&primal, &dual, complex)?;
    let (f_min, f_max) = construct_bounds(complex, f, &v_delta, delta)?;
    let f_mean = symmetrize(&f_min, &f_max);
    let (canceled, surviving): (Vec<_>, Vec<_>) = records
        .into_iter()
        .partition(|r| !r.is_essential() && r.persistence() <= two_delta);
    debug_assert_eq!(
        v_delta.critical_cells(complex).len(),
        2 * surviving.iter().filter(|r| !r.is_essential()).count()
            + surviving.iter().filter(|r| r.is_essential()).count()
    );
    Ok(SimplificationResult {
        v_delta,
        f_min,
        f_max,
        f_mean,
        surviving,
        canceled,
    })
}

/// The quadratic reference path: cancels every pair with persistence at
/// most `2 * delta` in the order of their negative cells, clamping the
/// attracting set of the positive cell up and the repelling set of the
/// negative cell down to the midpoint value before each cancelation.
///
/// Returns the final field and the plateau function, which is consistent
/// with it and within `delta` of `f`.
pub fn plateau_sequence(
    complex: &CellComplex,
    f: &CellFunction,
    field: &GradientField,
    order: &TotalOrder,
    delta: f64,
) -> Result<(GradientField, CellFunction)> {
    let two_delta = 2.0 * delta;
    let (records, _, _) = all_persistence_pairs(complex, f, order, two_delta)?;
    let mut candidates: Vec<&PersistenceRecord> = records
        .iter()
        .filter(|r| !r.is_essential() && r.persistence() <= two_delta)
        .collect();
    candidates.sort_by_key(|r| order.rank(r.negative.unwrap()));

    let mut current = field.clone();
    let mut g = f.clone();
    for record in candidates {
        let sigma = record.positive;
        let tau = record.negative.unwrap();
        let m = (f.value(sigma) + f.value(tau)) / 2.0;
        let hasse = HasseDiagram::new(complex, &current);
        let attracting = hasse.reachable_above(sigma);
        let repelling = hasse.reachable_below(tau);
        for c in complex.cells() {
            let raised = attracting[c.index()] && g.value(c) < m;
            let lowered = repelling[c.index()] && g.value(c) > m;
            if raised || lowered {
                g.set(c, m);
            }
        }
        current = cancel_pair(complex, &current, sigma, tau)?;
    }
    Ok((current, g))
}

/// Projected Gauss-Seidel smoothing inside the solution polytope: each
/// sweep moves every non-critical cell toward the value that locally
/// minimizes the Dirichlet energy of `g - f` over its Hasse neighbors,
/// then clamps back into the box and order intervals. Critical cells of
/// the field keep their values, so the persistence diagram of the output
/// is that of the input.
pub fn smooth_within_polytope(
    complex: &CellComplex,
    f: &CellFunction,
    f_min: &CellFunction,
    f_max: &CellFunction,
    v_delta: &GradientField,
    sweeps: usize,
) -> Result<CellFunction> {
    let hasse = HasseDiagram::new(complex, v_delta);
    let mut g = symmetrize(f_min, f_max);
    for _ in 0..sweeps {
        for c in complex.cells() {
            if v_delta.is_critical(c) || !f.value(c).is_finite() {
                continue;
            }
            let mut sum = 0.0f64;
            let mut count = 0usize;
            for &nb in hasse.above(c).iter().chain(hasse.below(c)) {
                if f.value(nb).is_finite() {
                    sum += g.value(nb) - f.value(nb);
                    count += 1;
                }
            }
            let target = if count == 0 {
                g.value(c)
            } else {
                f.value(c) + sum / count as f64
            };
            let mut lo = f_min.value(c);
            let mut hi = f_max.value(c);
            for &b in hasse.below(c) {
                lo = lo.max(g.value(b));
            }
            for &a in hasse.above(c) {
                hi = hi.min(g.value(a));
            }
            debug_assert!(lo <= hi);
            let clamped = if target < lo {
                lo
            } else if target > hi {
                hi
            } else {
                target
            };
            g.set(c, clamped);
        }
    }
    Ok(g)
}
