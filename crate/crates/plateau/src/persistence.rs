//! Persistence pairs of pseudo-Morse functions on surfaces.
//!
//! Pairs of dimension (0,1) are computed on the primal 1-skeleton by a
//! Kruskal sweep in the consistent total order; pairs of dimension (1,2)
//! are the (0,1) pairs of the dual 1-skeleton swept in the reversed order
//! with negated values. Each sweep also keeps the subforest obtained by
//! dropping negative edges above the cancelation threshold, which is the
//! input of the gradient-field extraction.

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::function::CellFunction;
use crate::morse::TotalOrder;

/// Dimensions of a persistence record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DimPair {
    /// A 0-cell merged by a 1-cell.
    ZeroOne,
    /// A 1-cell filled by a 2-cell.
    OneTwo,
    /// An unpaired class of the given dimension.
    Essential(u8),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceRecord {
    pub positive: CellId,
    pub negative: Option<CellId>,
    pub birth: f64,
    pub death: f64,
    pub dim_pair: DimPair,
}

impl PersistenceRecord {
    pub fn persistence(&self) -> f64 {
        if self.death == f64::INFINITY {
            f64::INFINITY
        } else {
            self.death - self.birth
        }
    }

    pub fn is_essential(&self) -> bool {
        self.negative.is_none()
    }

    /// Homology dimension of the class (the dimension of the positive cell).
    pub fn homology_dim(&self) -> u8 {
        match self.dim_pair {
            DimPair::ZeroOne => 0,
            DimPair::OneTwo => 1,
            DimPair::Essential(d) => d,
        }
    }
}

/// A finite (0,1)-style pair found by one Kruskal sweep, in the frame of
/// that sweep (for the dual sweep, `persistence` is measured on the negated
/// function).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForestPair {
    /// The younger component creator whose class dies.
    pub creator: CellId,
    /// The 1-cell that merges the two components.
    pub edge: CellId,
    pub persistence: f64,
}

/// Result of one Kruskal sweep over a 1-skeleton.
#[derive(Clone, Debug)]
pub struct SpanningForestResult {
    /// All spanning-forest edges: negative 1-cells plus 1-cells matched by
    /// the input field.
    pub tree_edges: Vec<CellId>,
    /// Finite pairs in sweep order.
    pub pairs: Vec<ForestPair>,
    /// Component creators of the full forest: one essential class each.
    pub creators: Vec<CellId>,
    /// Forest edges excluding negative 1-cells with persistence above the
    /// threshold.
    pub m_delta_edges: Vec<CellId>,
    /// Component creators of the thresholded forest; exactly the critical
    /// vertices of the simplified field.
    pub m_delta_creators: Vec<CellId>,
    /// Persistence hierarchy: (merged creator, surviving parent creator).
    pub hierarchy: Vec<(CellId, CellId)>,
}

/// Which 1-skeleton a sweep runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonSide {
    /// 0-cells joined by 1-cells; natural order and values.
    Primal,
    /// 2-cells joined by 1-cells; reversed order, negated values.
    Dual,
}

struct Sweep<'a> {
    complex: &'a CellComplex,
    order: &'a TotalOrder,
    f: &'a CellFunction,
    side: SkeletonSide,
}

impl<'a> Sweep<'a> {
    #[inline]
    fn rank(&self, c: CellId) -> u32 {
        match self.side {
            SkeletonSide::Primal => self.order.rank(c),
            SkeletonSide::Dual => self.order.len() as u32 - 1 - self.order.rank(c),
        }
    }

    #[inline]
    fn value(&self, c: CellId) -> f64 {
        match self.side {
            SkeletonSide::Primal => self.f.value(c),
            SkeletonSide::Dual => -self.f.value(c),
        }
    }

    fn endpoints(&self, e: CellId) -> Result<&'a [CellId]> {
        match self.side {
            SkeletonSide::Primal => {
                let ends = self.complex.facets(e);
                if ends.len() != 2 {
                    return Err(Error::InvalidComplex("1-cell without two 0-cell facets"));
                }
                Ok(ends)
            }
            SkeletonSide::Dual => {
                let ends = self.complex.cofacets(e);
                if ends.len() != 2 {
                    return Err(Error::NotClosedSurface {
                        edge: e,
                        count: ends.len(),
                    });
                }
                Ok(ends)
            }
        }
    }
}

/// Union-find where each root remembers the sweep-eldest creator of its
/// component.
struct Components {
    parent: Vec<u32>,
    size: Vec<u32>,
    creator: Vec<u32>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            creator: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32, creator: u32) {
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        self.creator[big as usize] = creator;
    }
}

/// Sweeps the 1-cells of the chosen skeleton in order, maintaining
/// connected components and their creators; a merging edge pairs with the
/// younger creator, a cycle-closing edge is skipped.
///
/// Disconnected inputs are fine: each component contributes one creator.
pub fn kruskal_persistence(
    complex: &CellComplex,
    side: SkeletonSide,
    order: &TotalOrder,
    f: &CellFunction,
    two_delta: f64,
) -> Result<SpanningForestResult> {
    let sweep = Sweep {
        complex,
        order,
        f,
        side,
    };
    let n = complex.len();
    let mut edges: Vec<CellId> = complex.cells_of_dim(1).collect();
    edges.sort_unstable_by_key(|e| sweep.rank(*e));

    let mut full = Components::new(n);
    let mut kept = Components::new(n);
    let mut result = SpanningForestResult {
        tree_edges: Vec::new(),
        pairs: Vec::new(),
        creators: Vec::new(),
        m_delta_edges: Vec::new(),
        m_delta_creators: Vec::new(),
        hierarchy: Vec::new(),
    };

    for e in edges {
        let ends = sweep.endpoints(e)?;
        let (u, v) = (ends[0], ends[1]);
        if u == v {
            continue;
        }
        let er = sweep.rank(e);
        // In a consistent order the only endpoint that can follow its edge
        // is the one matched to it, so this detects pairs of the input
        // field without consulting it.
        let matched = sweep.rank(u) > er || sweep.rank(v) > er;
        let (ru, rv) = (full.find(u.0), full.find(v.0));
        if matched {
            if ru == rv {
                return Err(Error::InternalInvariantViolation(
                    "matched 1-cell closes a cycle",
                ));
            }
            let elder = self::elder(&sweep, full.creator[ru as usize], full.creator[rv as usize]);
            full.union(ru, rv, elder);
            let (ku, kv) = (kept.find(u.0), kept.find(v.0));
            let kelder = self::elder(&sweep, kept.creator[ku as usize], kept.creator[kv as usize]);
            kept.union(ku, kv, kelder);
            result.tree_edges.push(e);
            result.m_delta_edges.push(e);
            continue;
        }
        if ru == rv {
            continue;
        }
        let a = CellId(full.creator[ru as usize]);
        let b = CellId(full.creator[rv as usize]);
        let (elder, younger) = if sweep.rank(a) < sweep.rank(b) {
            (a, b)
        } else {
            (b, a)
        };
        let persistence = sweep.value(e) - sweep.value(younger);
        result.pairs.push(ForestPair {
            creator: younger,
            edge: e,
            persistence,
        });
        result.hierarchy.push((younger, elder));
        result.tree_edges.push(e);
        full.union(ru, rv, elder.0);
        if persistence <= two_delta {
            let (ku, kv) = (kept.find(u.0), kept.find(v.0));
            let kelder = self::elder(&sweep, kept.creator[ku as usize], kept.creator[kv as usize]);
            kept.union(ku, kv, kelder);
            result.m_delta_edges.push(e);
        }
    }

    let vertex_dim = match side {
        SkeletonSide::Primal => 0,
        SkeletonSide::Dual => 2,
    };
    let mut seen_full = vec![false; n];
    let mut seen_kept = vec![false; n];
    for c in complex.cells_of_dim(vertex_dim) {
        let r = full.find(c.0);
        if !seen_full[r as usize] {
            seen_full[r as usize] = true;
            result.creators.push(CellId(full.creator[r as usize]));
        }
        let k = kept.find(c.0);
        if !seen_kept[k as usize] {
            seen_kept[k as usize] = true;
            result.m_delta_creators.push(CellId(kept.creator[k as usize]));
        }
    }
    result.creators.sort_unstable_by_key(|c| sweep.rank(*c));
    result
        .m_delta_creators
        .sort_unstable_by_key(|c| sweep.rank(*c));
    Ok(result)
}

fn elder(sweep: &Sweep<'_>, a: u32, b: u32) -> u32 {
    if sweep.rank(CellId(a)) <= sweep.rank(CellId(b)) {
        a
    } else {
        b
    }
}

/// Computes every persistence record of a closed surface: both sweeps,
/// translated into primal cells and values, plus the essential classes.
///
/// Essential 1-cells (2 per genus) are the 1-cells of neither spanning
/// forest; they can never be canceled.
pub fn all_persistence_pairs(
    complex: &CellComplex,
    f: &CellFunction,
    order: &TotalOrder,
    two_delta: f64,
) -> Result<(Vec<PersistenceRecord>, SpanningForestResult, SpanningForestResult)> {
    for e in complex.cells_of_dim(1) {
        let count = complex.cofacets(e).len();
        if count != 2 {
            return Err(Error::NotClosedSurface { edge: e, count });
        }
    }
    let primal = kruskal_persistence(complex, SkeletonSide::Primal, order, f, two_delta)?;
    let dual = kruskal_persistence(complex, SkeletonSide::Dual, order, f, two_delta)?;

    let mut records = Vec::new();
    for p in &primal.pairs {
        records.push(PersistenceRecord {
            positive: p.creator,
            negative: Some(p.edge),
            birth: f.value(p.creator),
            death: f.value(p.edge),
            dim_pair: DimPair::ZeroOne,
        });
    }
    for &c in &primal.creators {
        records.push(PersistenceRecord {
            positive: c,
            negative: None,
            birth: f.value(c),
            death: f64::INFINITY,
            dim_pair: DimPair::Essential(0),
        });
    }
    for p in &dual.pairs {
        records.push(PersistenceRecord {
            positive: p.edge,
            negative: Some(p.creator),
            birth: f.value(p.edge),
            death: f.value(p.creator),
            dim_pair: DimPair::OneTwo,
        });
    }
    for &c in &dual.creators {
        records.push(PersistenceRecord {
            positive: c,
            negative: None,
            birth: f.value(c),
            death: f64::INFINITY,
            dim_pair: DimPair::Essential(2),
        });
    }
    let mut in_tree = vec![false; complex.len()];
    for &e in primal.tree_edges.iter().chain(&dual.tree_edges) {
        debug_assert!(!in_tree[e.index()], "forests must not share edges");
        in_tree[e.index()] = true;
    }
    for e in complex.cells_of_dim(1) {
        if !in_tree[e.index()] {
            records.push(PersistenceRecord {
                positive: e,
                negative: None,
                birth: f.value(e),
                death: f64::INFINITY,
                dim_pair: DimPair::Essential(1),
            });
        }
    }
    sort_records(&mut records);
    Ok((records, primal, dual))
}

pub(crate) fn sort_records(records: &mut [PersistenceRecord]) {
    records.sort_by(|a, b| {
        a.homology_dim()
            .cmp(&b.homology_dim())
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
            .then(a.positive.cmp(&b.positive))
    });
}

/// A point of a persistence diagram; the diagonal is implicit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagramPoint {
    pub dim: u8,
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    pub fn persistence(&self) -> f64 {
        if self.death == f64::INFINITY {
            f64::INFINITY
        } else {
            self.death - self.birth
        }
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }
}

/// The multiset of (birth, death) value pairs of a record set.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PersistenceDiagram {
    pub points: Vec<DiagramPoint>,
}

/// Projects records to diagram points, keeping multiplicity.
pub fn diagram(records: &[PersistenceRecord]) -> PersistenceDiagram {
    let mut points: Vec<DiagramPoint> = records
        .iter()
        .map(|r| DiagramPoint {
            dim: r.homology_dim(),
            birth: r.birth,
            death: r.death,
        })
        .collect();
    points.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    PersistenceDiagram { points }
}
