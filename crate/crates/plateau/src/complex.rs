//! Finite regular CW complexes on combinatorial surfaces.
//!
//! Cells of all dimensions share one dense id space. Facet and cofacet
//! incidences are stored in compressed rows, so a complex is cheap to share
//! and immutable after construction.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::function::CellFunction;

/// Dense identifier of a cell within one complex, contiguous in `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellId(pub u32);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Compressed rows of cell incidences (facets or cofacets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidences {
    offsets: Vec<u32>,
    targets: Vec<CellId>,
}

impl Incidences {
    fn from_rows(rows: &[Vec<CellId>]) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0u32);
        let mut targets = Vec::new();
        for row in rows {
            targets.extend_from_slice(row);
            offsets.push(targets.len() as u32);
        }
        Incidences { offsets, targets }
    }

    #[inline]
    pub fn row(&self, c: CellId) -> &[CellId] {
        let i = c.index();
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Reverses every incidence; row targets come out sorted by source id.
    fn transpose(&self, n: usize) -> Self {
        let mut counts = vec![0u32; n + 1];
        for t in &self.targets {
            counts[t.index() + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut targets = vec![CellId(0); self.targets.len()];
        for source in 0..self.rows() {
            for t in self.row(CellId(source as u32)) {
                targets[fill[t.index()] as usize] = CellId(source as u32);
                fill[t.index()] += 1;
            }
        }
        Incidences { offsets, targets }
    }
}

/// A finite CW complex of dimension at most 2.
///
/// Construction validates only what cannot be represented at all; use
/// [`CellComplex::validate_surface`] to check manifoldness. Non-regular
/// complexes (repeated facets) are representable so that test fixtures can
/// exercise the rejection paths.
#[derive(Clone, Debug)]
pub struct CellComplex {
    dims: Vec<u8>,
    facets: Incidences,
    cofacets: Incidences,
    boundary_components: usize,
    virtual_cells: Vec<CellId>,
}

/// The dual of a closed combinatorial surface.
///
/// Dual cells reuse the primal id space: the dual of cell `c` is the cell
/// with the same id and dimension `2 - dim(c)`, so the correspondence maps
/// are the identity on ids.
#[derive(Clone, Debug)]
pub struct DualComplex {
    pub complex: CellComplex,
}

impl DualComplex {
    #[inline]
    pub fn primal_id(&self, dual: CellId) -> CellId {
        dual
    }

    #[inline]
    pub fn dual_id(&self, primal: CellId) -> CellId {
        primal
    }
}

impl CellComplex {
    /// Builds a complex from explicit per-cell dimensions and facet lists.
    ///
    /// Intended for fixtures and file ingestion; facet multiplicity is kept
    /// as given.
    pub fn from_cell_lists(dims: Vec<u8>, facet_rows: Vec<Vec<CellId>>) -> Result<Self> {
        if dims.len() != facet_rows.len() {
            return Err(Error::InvalidComplex("dims and facet rows differ in length"));
        }
        if dims.len() > u32::MAX as usize {
            return Err(Error::SizeOverflow);
        }
        let n = dims.len();
        for (i, row) in facet_rows.iter().enumerate() {
            if dims[i] > 2 {
                return Err(Error::InvalidComplex("cell dimension above 2"));
            }
            if dims[i] == 0 && !row.is_empty() {
                return Err(Error::InvalidComplex("0-cell with facets"));
            }
            for t in row {
                if t.index() >= n {
                    return Err(Error::InvalidComplex("facet id out of range"));
                }
                if dims[t.index()] + 1 != dims[i] {
                    return Err(Error::InvalidComplex("facet is not of codimension 1"));
                }
            }
        }
        let facets = Incidences::from_rows(&facet_rows);
        let cofacets = facets.transpose(n);
        let mut complex = CellComplex {
            dims,
            facets,
            cofacets,
            boundary_components: 0,
            virtual_cells: Vec::new(),
        };
        complex.boundary_components = complex.count_boundary_components()?;
        Ok(complex)
    }

    /// Builds the complex of a triangle mesh: 0-cells are the vertices,
    /// 1-cells the distinct edges, 2-cells the triangles.
    pub fn from_triangle_mesh(vertex_count: usize, triangles: &[[usize; 3]]) -> Result<Self> {
        let mut edge_ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut edge_rows: Vec<Vec<CellId>> = Vec::new();
        let mut edge_use = Vec::new();
        let mut tri_rows: Vec<Vec<CellId>> = Vec::with_capacity(triangles.len());

        for (t, tri) in triangles.iter().enumerate() {
            let [a, b, c] = *tri;
            if a == b || b == c || a == c {
                return Err(Error::DegenerateTriangle(t));
            }
            if a >= vertex_count || b >= vertex_count || c >= vertex_count {
                return Err(Error::InvalidComplex("triangle vertex index out of range"));
            }
            let mut row = Vec::with_capacity(3);
            for (u, v) in [(a, b), (b, c), (a, c)] {
                let key = (u.min(v), u.max(v));
                let next = edge_rows.len() as u32;
                let e = *edge_ids.entry(key).or_insert_with(|| {
                    edge_rows.push(vec![CellId(key.0 as u32), CellId(key.1 as u32)]);
                    edge_use.push(0usize);
                    next
                });
                edge_use[e as usize] += 1;
                if edge_use[e as usize] > 2 {
                    return Err(Error::NonManifoldEdge(key.0, key.1, edge_use[e as usize]));
                }
                row.push(CellId(e));
            }
            tri_rows.push(row);
        }

        let edge_count = edge_rows.len();
        let total = vertex_count as u64 + edge_count as u64 + triangles.len() as u64;
        if total > u32::MAX as u64 {
            return Err(Error::SizeOverflow);
        }

        let mut dims = vec![0u8; vertex_count];
        dims.extend(std::iter::repeat_n(1, edge_count));
        dims.extend(std::iter::repeat_n(2, triangles.len()));

        let vertex_base = vertex_count as u32;
        let mut rows: Vec<Vec<CellId>> = vec![Vec::new(); vertex_count];
        rows.extend(edge_rows);
        rows.extend(tri_rows.into_iter().map(|row| {
            row.into_iter()
                .map(|e| CellId(e.0 + vertex_base))
                .collect::<Vec<_>>()
        }));
        // Edge facet rows already hold vertex ids, which are unshifted.
        Self::from_cell_lists(dims, rows)
    }

    /// Builds the cubical complex of a `rows x cols` pixel image: each pixel
    /// is a 2-cell.
    pub fn from_pixel_grid(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidComplex("pixel grid must be at least 1x1"));
        }
        let nv = (rows as u64 + 1) * (cols as u64 + 1);
        let nh = (rows as u64 + 1) * cols as u64;
        let nw = rows as u64 * (cols as u64 + 1);
        let np = rows as u64 * cols as u64;
        let total = nv + nh + nw + np;
        if total > u32::MAX as u64 {
            return Err(Error::SizeOverflow);
        }
        let (nv, nh, nw, np) = (nv as u32, nh as u32, nw as u32, np as u32);
        let vstride = cols as u32 + 1;

        let vert = |r: u32, c: u32| CellId(r * vstride + c);
        let hedge = |r: u32, c: u32| CellId(nv + r * cols as u32 + c);
        let wedge = |r: u32, c: u32| CellId(nv + nh + r * vstride + c);

        let n = (nv + nh + nw + np) as usize;
        let mut dims = vec![0u8; n];
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity((nh as usize + nw as usize) * 2 + np as usize * 4);
        offsets.push(0u32);
        for _ in 0..nv {
            offsets.push(targets.len() as u32);
        }
        for r in 0..=rows as u32 {
            for c in 0..cols as u32 {
                dims[hedge(r, c).index()] = 1;
                targets.push(vert(r, c));
                targets.push(vert(r, c + 1));
                offsets.push(targets.len() as u32);
            }
        }
        for r in 0..rows as u32 {
            for c in 0..=cols as u32 {
                dims[wedge(r, c).index()] = 1;
                targets.push(vert(r, c));
                targets.push(vert(r + 1, c));
                offsets.push(targets.len() as u32);
            }
        }
        for r in 0..rows as u32 {
            for c in 0..cols as u32 {
                dims[(nv + nh + nw + r * cols as u32 + c) as usize] = 2;
                targets.push(hedge(r, c));
                targets.push(hedge(r + 1, c));
                targets.push(wedge(r, c));
                targets.push(wedge(r, c + 1));
                offsets.push(targets.len() as u32);
            }
        }
        let facets = Incidences { offsets, targets };
        let cofacets = facets.transpose(n);
        Ok(CellComplex {
            dims,
            facets,
            cofacets,
            boundary_components: 1,
            virtual_cells: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    #[inline]
    pub fn dim(&self, c: CellId) -> u8 {
        self.dims[c.index()]
    }

    #[inline]
    pub fn facets(&self, c: CellId) -> &[CellId] {
        self.facets.row(c)
    }

    #[inline]
    pub fn cofacets(&self, c: CellId) -> &[CellId] {
        self.cofacets.row(c)
    }

    // Raw storage views for the traversal-heavy passes.
    pub(crate) fn facet_store(&self) -> (&[u32], &[CellId]) {
        (&self.facets.offsets, &self.facets.targets)
    }

    pub(crate) fn cofacet_store(&self) -> (&[u32], &[CellId]) {
        (&self.cofacets.offsets, &self.cofacets.targets)
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.len() as u32).map(CellId)
    }

    pub fn cells_of_dim(&self, d: u8) -> impl Iterator<Item = CellId> + '_ {
        self.cells().filter(move |c| self.dim(*c) == d)
    }

    /// Cell counts by dimension `[c0, c1, c2]`.
    pub fn counts(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for &d in &self.dims {
            counts[d as usize] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [c0, c1, c2] = self.counts();
        c0 as i64 - c1 as i64 + c2 as i64
    }

    pub fn boundary_components(&self) -> usize {
        self.boundary_components
    }

    pub fn virtual_cells(&self) -> &[CellId] {
        &self.virtual_cells
    }

    pub fn is_virtual(&self, c: CellId) -> bool {
        self.virtual_cells.binary_search(&c).is_ok()
    }

    /// True when every 1-cell has exactly two cofacet incidences.
    pub fn is_closed(&self) -> bool {
        self.cells_of_dim(1).all(|e| self.cofacets(e).len() == 2)
    }

    fn boundary_edges(&self) -> Vec<CellId> {
        self.cells_of_dim(1)
            .filter(|e| self.cofacets(*e).len() == 1)
            .collect()
    }

    /// Groups boundary 1-cells into connected components (boundary cycles on
    /// a valid surface) and returns one edge list per component.
    fn boundary_cycles(&self) -> Result<Vec<Vec<CellId>>> {
        let boundary = self.boundary_edges();
        if boundary.is_empty() {
            return Ok(Vec::new());
        }
        // Union-find over boundary edges, linked through shared vertices.
        let mut parent: Vec<usize> = (0..boundary.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut at_vertex: HashMap<CellId, usize> = HashMap::new();
        for (i, e) in boundary.iter().enumerate() {
            let ends = self.facets(*e);
            if ends.len() != 2 {
                return Err(Error::InvalidBoundary("boundary 1-cell without two 0-cells"));
            }
            for v in ends {
                match at_vertex.entry(*v) {
                    std::collections::hash_map::Entry::Occupied(o) => {
                        let a = find(&mut parent, *o.get());
                        let b = find(&mut parent, i);
                        parent[a] = b;
                    }
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(i);
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<CellId>> = HashMap::new();
        for (i, e) in boundary.iter().enumerate() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(*e);
        }
        let mut cycles: Vec<Vec<CellId>> = groups.into_values().collect();
        cycles.sort_by_key(|cycle| cycle[0]);
        Ok(cycles)
    }

    fn count_boundary_components(&self) -> Result<usize> {
        Ok(self.boundary_cycles()?.len())
    }

    /// Attaches one virtual 2-cell (function value `+inf`) to each boundary
    /// component, producing a closed surface. Idempotent on closed surfaces.
    pub fn cap_boundary(self, f: CellFunction) -> Result<(CellComplex, CellFunction)> {
        let cycles = self.boundary_cycles()?;
        if cycles.is_empty() {
            return Ok((self, f));
        }
        let extra = cycles.len();
        if self.len() as u64 + extra as u64 > u32::MAX as u64 {
            return Err(Error::SizeOverflow);
        }
        let n = self.len();
        let mut dims = self.dims;
        let mut values = f.into_values();
        let mut offsets = self.facets.offsets;
        let mut targets = self.facets.targets;
        let mut virtual_cells = self.virtual_cells;
        for cycle in cycles {
            dims.push(2);
            values.push(f64::INFINITY);
            targets.extend_from_slice(&cycle);
            offsets.push(targets.len() as u32);
            virtual_cells.push(CellId((dims.len() - 1) as u32));
        }
        virtual_cells.sort();
        let facets = Incidences { offsets, targets };
        let cofacets = facets.transpose(n + extra);
        let complex = CellComplex {
            dims,
            facets,
            cofacets,
            boundary_components: 0,
            virtual_cells,
        };
        Ok((complex, CellFunction::new(values)))
    }

    /// The dual complex of a closed surface; ids are shared with the primal.
    pub fn dual(&self) -> Result<DualComplex> {
        for e in self.cells_of_dim(1) {
            let count = self.cofacets(e).len();
            if count != 2 {
                return Err(Error::NotClosedSurface { edge: e, count });
            }
        }
        let dims = self.dims.iter().map(|d| 2 - d).collect();
        Ok(DualComplex {
            complex: CellComplex {
                dims,
                facets: self.cofacets.clone(),
                cofacets: self.facets.clone(),
                boundary_components: 0,
                virtual_cells: self.virtual_cells.clone(),
            },
        })
    }

    /// Checks the combinatorial surface conditions and reports every
    /// violation found.
    pub fn validate_surface(&self) -> SurfaceReport {
        let mut issues = Vec::new();
        for c in self.cells() {
            let facets = self.facets(c);
            for (i, a) in facets.iter().enumerate() {
                if facets[i + 1..].contains(a) {
                    issues.push(SurfaceIssue::RepeatedFacet { cell: c });
                    break;
                }
            }
        }
        let mut closed = true;
        for e in self.cells_of_dim(1) {
            let nf = self.facets(e).len();
            if nf != 2 {
                issues.push(SurfaceIssue::EdgeFacetCount { edge: e, count: nf });
            }
            let nc = self.cofacets(e).len();
            if nc > 2 {
                issues.push(SurfaceIssue::EdgeCofacetExcess { edge: e, count: nc });
            }
            if nc < 2 {
                closed = false;
            }
        }
        for v in self.cells_of_dim(0) {
            if !self.vertex_link_ok(v) {
                issues.push(SurfaceIssue::VertexLinkBroken { vertex: v });
            }
        }
        SurfaceReport {
            manifold: issues.is_empty(),
            closed,
            boundary_components: self.boundary_components,
            issues,
        }
    }

    /// The link of a 0-cell must be a single path or a single cycle: build
    /// the graph whose nodes are the edges at `v`, adjacent when a common
    /// 2-cell contains both, and check degrees and connectivity.
    fn vertex_link_ok(&self, v: CellId) -> bool {
        let edges = self.cofacets(v);
        if edges.is_empty() {
            return false;
        }
        let slot = |e: CellId| edges.iter().position(|x| *x == e);
        let mut degree = vec![0usize; edges.len()];
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        let mut seen_faces: Vec<CellId> = Vec::new();
        for e in edges {
            for t in self.cofacets(*e) {
                if seen_faces.contains(t) {
                    continue;
                }
                seen_faces.push(*t);
                let local: Vec<usize> =
                    self.facets(*t).iter().filter_map(|x| slot(*x)).collect();
                if local.len() != 2 {
                    return false;
                }
                degree[local[0]] += 1;
                degree[local[1]] += 1;
                adjacency[local[0]].push(local[1]);
                adjacency[local[1]].push(local[0]);
            }
        }
        if degree.iter().any(|d| *d > 2) {
            return false;
        }
        // Connectivity by traversal from node 0.
        let mut visited = vec![false; edges.len()];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adjacency[x] {
                if !visited[y] {
                    visited[y] = true;
                    stack.push(y);
                }
            }
        }
        if visited.iter().any(|x| !x) {
            return false;
        }
        let endpoints = degree.iter().filter(|d| **d == 1).count();
        endpoints == 0 || endpoints == 2
    }
}

/// Outcome of [`CellComplex::validate_surface`].
#[derive(Clone, Debug)]
pub struct SurfaceReport {
    pub manifold: bool,
    pub closed: bool,
    pub boundary_components: usize,
    pub issues: Vec<SurfaceIssue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceIssue {
    /// A cell lists the same facet more than once (non-regular attachment).
    RepeatedFacet { cell: CellId },
    /// A 1-cell with three or more cofacet incidences.
    EdgeCofacetExcess { edge: CellId, count: usize },
    /// A 1-cell without exactly two 0-cell facets.
    EdgeFacetCount { edge: CellId, count: usize },
    /// The link of a 0-cell is not a single path or cycle.
    VertexLinkBroken { vertex: CellId },
}

impl fmt::Display for SurfaceIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceIssue::RepeatedFacet { cell } => write!(f, "cell {cell} repeats a facet"),
            SurfaceIssue::EdgeCofacetExcess { edge, count } => {
                write!(f, "1-cell {edge} has {count} cofacets")
            }
            SurfaceIssue::EdgeFacetCount { edge, count } => {
                write!(f, "1-cell {edge} has {count} facets")
            }
            SurfaceIssue::VertexLinkBroken { vertex } => {
                write!(f, "link of 0-cell {vertex} is not a path or cycle")
            }
        }
    }
}

/// The boundary of a tetrahedron: the minimal triangulated sphere.
pub fn tetrahedron_boundary() -> CellComplex {
    CellComplex::from_triangle_mesh(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
        .expect("tetrahedron boundary is a valid mesh")
}
