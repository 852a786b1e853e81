//! Hexagonal lattice coordinates and the finite hosts built from them.
//!
//! Vertices of the hexagonal grid of height `m` are integer triples summing
//! to `m`; two are adjacent when their difference is one of the six unit
//! directions. The triangular-shaped template `Δ_m` is the induced patch on
//! non-negative triples. Finite hosts produced here: lattice windows,
//! 6-regular tori (lattice quotients by a translation lattice), and cone
//! lattices with a single off-6 apex.

use std::ops::{Add, Sub};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covers::GroupAction;
use crate::graph::{Graph, VertexId};

/// A point of the hexagonal grid, as an integer triple.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct HexCoord(pub i32, pub i32, pub i32);

impl HexCoord {
    pub fn height(self) -> i32 {
        self.0 + self.1 + self.2
    }

    /// Graph norm of a height-zero vector: the lattice distance to the origin.
    pub fn norm(self) -> i32 {
        debug_assert_eq!(self.height(), 0);
        self.0.abs().max(self.1.abs()).max(self.2.abs())
    }

    pub fn to_axial(self) -> (i32, i32) {
        debug_assert_eq!(self.height(), 0);
        (self.0, -self.2)
    }

    pub fn from_axial(p: i32, q: i32) -> HexCoord {
        HexCoord(p, q - p, -q)
    }
}

impl Add for HexCoord {
    type Output = HexCoord;
    fn add(self, rhs: HexCoord) -> HexCoord {
        HexCoord(self.0 + rhs.0, self.1 + rhs.1, self.2 + rhs.2)
    }
}

impl Sub for HexCoord {
    type Output = HexCoord;
    fn sub(self, rhs: HexCoord) -> HexCoord {
        HexCoord(self.0 - rhs.0, self.1 - rhs.1, self.2 - rhs.2)
    }
}

/// The six difference vectors of the grid.
pub const DIRECTIONS: [HexCoord; 6] = [
    HexCoord(1, -1, 0),
    HexCoord(1, 0, -1),
    HexCoord(-1, 1, 0),
    HexCoord(0, 1, -1),
    HexCoord(-1, 0, 1),
    HexCoord(0, -1, 1),
];

#[derive(Debug, Error)]
pub enum HexError {
    #[error("side {0} too small for erosion (needs at least {1})")]
    ErodeTooSmall(u32, u32),
    #[error("torus basis is degenerate (zero lattice determinant)")]
    DegenerateBasis,
    #[error("torus basis admits a nonzero lattice vector of graph norm {0} < 4")]
    NormTooSmall(i32),
    #[error("coordinate heights do not match: {0} vs {1}")]
    HeightMismatch(i32, i32),
    #[error("cone lattice needs apex degree >= 6 and radius >= 1 (got degree {0}, radius {1})")]
    BadConeParameters(u32, u32),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Coordinates of `Δ_m` in row-major order: row `i` holds the
/// `i + 1` triples `(m - i, i - j, j)` for `j = 0..=i`.
pub fn delta_coords(m: u32) -> Vec<HexCoord> {
    let m = m as i32;
    let mut out = Vec::with_capacity(((m + 1) * (m + 2) / 2) as usize);
    for i in 0..=m {
        for j in 0..=i {
            out.push(HexCoord(m - i, i - j, j));
        }
    }
    out
}

/// Row-major index of row `i`, column `j`.
pub fn delta_index(i: u32, j: u32) -> usize {
    (i as usize * (i as usize + 1)) / 2 + j as usize
}

/// A triangular-shaped template: `Δ_m` translated by `origin`.
#[derive(Debug, Clone)]
pub struct DeltaTemplate {
    pub side: u32,
    pub origin: HexCoord,
    coords: Vec<HexCoord>,
    graph: Graph,
    index: FxHashMap<HexCoord, VertexId>,
}

impl DeltaTemplate {
    pub fn coords(&self) -> &[HexCoord] {
        &self.coords
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_at(&self, c: HexCoord) -> Option<VertexId> {
        self.index.get(&c).copied()
    }

    /// Boundary subgraph: vertices of template degree less than six together
    /// with the edges lying in a single template triangle. For `m = 0` this
    /// degenerates to the single vertex with no edges.
    pub fn boundary(&self) -> BoundarySubgraph {
        let vertices: Vec<VertexId> = self
            .graph
            .vertices()
            .filter(|&v| self.graph.degree(v) < 6)
            .collect();
        let edges: Vec<(VertexId, VertexId)> = self
            .graph
            .edges()
            .filter(|&(u, v)| self.graph.triangles_on_edge(u, v) == 1)
            .collect();
        BoundarySubgraph { vertices, edges }
    }

    /// Coordinates with every entry at least `depth` above the origin.
    pub fn inner_coords(&self, depth: i32) -> Vec<HexCoord> {
        self.coords
            .iter()
            .copied()
            .filter(|&c| {
                let rel = c - self.origin;
                rel.0 >= depth && rel.1 >= depth && rel.2 >= depth
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct BoundarySubgraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

/// Builds `Δ_m` at the origin.
pub fn delta_graph(m: u32) -> DeltaTemplate {
    delta_graph_at(m, HexCoord(0, 0, 0))
}

fn delta_graph_at(m: u32, origin: HexCoord) -> DeltaTemplate {
    let coords: Vec<HexCoord> = delta_coords(m).into_iter().map(|c| c + origin).collect();
    let mut index = FxHashMap::default();
    for (i, &c) in coords.iter().enumerate() {
        index.insert(c, VertexId(i as u32));
    }
    let mut edges = Vec::new();
    for (i, &c) in coords.iter().enumerate() {
        for d in DIRECTIONS {
            if let Some(&j) = index.get(&(c + d)) {
                if (i as u32) < j.0 {
                    edges.push((i as u32, j.0));
                }
            }
        }
    }
    let graph = Graph::new(coords.len(), &edges).unwrap();
    DeltaTemplate { side: m, origin, coords, graph, index }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ErodeMode {
    /// Remove the boundary: `Δ_m` becomes `Δ_{m-3}` (coordinates >= 1).
    Boundary,
    /// Remove the closed neighbourhood of the boundary: `Δ_m` becomes
    /// `Δ_{m-6}` (coordinates >= 2).
    ClosedNeighbourhood,
}

/// Erodes a template, returning the smaller template translated so its
/// coordinates sit inside the original.
pub fn erode(t: &DeltaTemplate, mode: ErodeMode) -> Result<DeltaTemplate, HexError> {
    let (depth, need) = match mode {
        ErodeMode::Boundary => (1, 3),
        ErodeMode::ClosedNeighbourhood => (2, 6),
    };
    if t.side < need {
        return Err(HexError::ErodeTooSmall(t.side, need));
    }
    let shift = HexCoord(depth, depth, depth);
    Ok(delta_graph_at(t.side - 3 * depth as u32, t.origin + shift))
}

/// The translation `(a1,a2,a3) -> (a1+t1, a2+t2, a3+t3)`, mapping `Δ_m`
/// into the grid of height `m + t1 + t2 + t3`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TriangleInclusion {
    pub offset: HexCoord,
}

impl TriangleInclusion {
    pub fn new(offset: HexCoord) -> TriangleInclusion {
        TriangleInclusion { offset }
    }

    pub fn apply(&self, c: HexCoord) -> HexCoord {
        c + self.offset
    }

    pub fn compose(&self, other: &TriangleInclusion) -> TriangleInclusion {
        TriangleInclusion { offset: self.offset + other.offset }
    }
}

/// The three unit offsets `E` used to place `Δ_{m-1}` in the corners of `Δ_m`.
pub const UNIT_OFFSETS: [HexCoord; 3] =
    [HexCoord(1, 0, 0), HexCoord(0, 1, 0), HexCoord(0, 0, 1)];

/// The central inverted triangle of `Δ_2`, in height-2 coordinates.
pub const NABLA_1: [HexCoord; 3] = [HexCoord(1, 1, 0), HexCoord(0, 1, 1), HexCoord(1, 0, 1)];

/// The outer completions of the edges of `Δ_1`: together with `Δ_1` they
/// span the inverted one-larger triangle. Pairwise non-adjacent in the grid.
pub const NABLA_2_PRIME: [HexCoord; 3] =
    [HexCoord(1, 1, -1), HexCoord(-1, 1, 1), HexCoord(1, -1, 1)];

/// A coordinate permutation acting on the grid; the six of them form the
/// symmetry group of every `Δ_m`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CoordPerm(pub [usize; 3]);

impl CoordPerm {
    pub fn apply(&self, c: HexCoord) -> HexCoord {
        let arr = [c.0, c.1, c.2];
        HexCoord(arr[self.0[0]], arr[self.0[1]], arr[self.0[2]])
    }

    pub fn compose(&self, other: &CoordPerm) -> CoordPerm {
        // (self ∘ other)(c) = self(other(c))
        CoordPerm([other.0[self.0[0]], other.0[self.0[1]], other.0[self.0[2]]])
    }

    /// Odd permutations reverse orientation; they are the reflections.
    pub fn is_reflection(&self) -> bool {
        let p = self.0;
        let mut inversions = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }
}

/// The six coordinate permutations, identity first.
pub fn symmetries() -> [CoordPerm; 6] {
    [
        CoordPerm([0, 1, 2]),
        CoordPerm([1, 2, 0]),
        CoordPerm([2, 0, 1]),
        CoordPerm([0, 2, 1]),
        CoordPerm([1, 0, 2]),
        CoordPerm([2, 1, 0]),
    ]
}

/// Vertex permutation induced on a template by a coordinate symmetry.
/// Only valid for templates at the origin (symmetries fix the origin copy).
pub fn symmetry_vertex_permutation(t: &DeltaTemplate, perm: &CoordPerm) -> Vec<VertexId> {
    t.coords()
        .iter()
        .map(|&c| t.vertex_at(perm.apply(c - t.origin) + t.origin).expect("symmetry preserves the template"))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowSpec {
    pub center: [i32; 3],
    pub radius: u32,
}

/// A finite ball of the hexagonal grid, with coordinates attached.
#[derive(Debug, Clone)]
pub struct HexWindow {
    pub spec: WindowSpec,
    pub graph: Graph,
    pub coords: Vec<HexCoord>,
    index: FxHashMap<HexCoord, VertexId>,
}

impl HexWindow {
    pub fn vertex_at(&self, c: HexCoord) -> Option<VertexId> {
        self.index.get(&c).copied()
    }
}

/// Induced subgraph of the grid on coordinates within `radius` of `center`;
/// `1 + 3r(r+1)` vertices.
pub fn hex_window(spec: &WindowSpec) -> HexWindow {
    let center = HexCoord(spec.center[0], spec.center[1], spec.center[2]);
    let r = spec.radius as i32;
    let mut coords = Vec::new();
    for d1 in -r..=r {
        for d2 in -r..=r {
            let d3 = -d1 - d2;
            let d = HexCoord(d1, d2, d3);
            if d.norm() <= r {
                coords.push(center + d);
            }
        }
    }
    coords.sort_unstable();
    let mut index = FxHashMap::default();
    for (i, &c) in coords.iter().enumerate() {
        index.insert(c, VertexId(i as u32));
    }
    let mut edges = Vec::new();
    for (i, &c) in coords.iter().enumerate() {
        for d in DIRECTIONS {
            if let Some(&j) = index.get(&(c + d)) {
                if (i as u32) < j.0 {
                    edges.push((i as u32, j.0));
                }
            }
        }
    }
    let labels = coords
        .iter()
        .map(|c| serde_json::json!([c.0, c.1, c.2]))
        .collect();
    let graph = Graph::new(coords.len(), &edges).unwrap().with_labels(labels);
    HexWindow { spec: spec.clone(), graph, coords, index }
}

/// Two independent lattice translation vectors in axial coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusSpec {
    pub basis: [[i32; 2]; 2],
}

/// Hermite-reduced description of the translation lattice: basis
/// `(d1, k), (0, d2)` with `0 <= k < d2`.
#[derive(Debug, Clone, Copy)]
struct LatticeForm {
    d1: i32,
    k: i32,
    d2: i32,
}

impl LatticeForm {
    fn from_basis(basis: [[i32; 2]; 2]) -> Result<LatticeForm, HexError> {
        let mut r = (basis[0][0] as i64, basis[0][1] as i64);
        let mut s = (basis[1][0] as i64, basis[1][1] as i64);
        while s.0 != 0 {
            let q = r.0.div_euclid(s.0);
            r = (r.0 - q * s.0, r.1 - q * s.1);
            std::mem::swap(&mut r, &mut s);
        }
        if r.0 == 0 || s.1 == 0 {
            return Err(HexError::DegenerateBasis);
        }
        let d1 = r.0.abs();
        let r1 = if r.0 < 0 { -r.1 } else { r.1 };
        let d2 = s.1.abs();
        let k = r1.rem_euclid(d2);
        Ok(LatticeForm { d1: d1 as i32, k: k as i32, d2: d2 as i32 })
    }

    fn reduce(&self, p: i32, q: i32) -> (i32, i32) {
        let i = (p as i64).div_euclid(self.d1 as i64);
        let p = p as i64 - i * self.d1 as i64;
        let q = q as i64 - i * self.k as i64;
        (p as i32, q.rem_euclid(self.d2 as i64) as i32)
    }

    fn contains(&self, p: i32, q: i32) -> bool {
        self.reduce(p, q) == (0, 0)
    }

    fn point_count(&self) -> usize {
        self.d1 as usize * self.d2 as usize
    }
}

/// A 6-regular quotient of the hexagonal grid by a translation lattice.
#[derive(Debug, Clone)]
pub struct Torus {
    pub spec: TorusSpec,
    pub graph: Graph,
    /// Axial coordinates of the canonical representatives, by vertex id.
    pub reps: Vec<(i32, i32)>,
    form: LatticeForm,
    index: FxHashMap<(i32, i32), VertexId>,
}

impl Torus {
    /// Vertex holding the class of an axial coordinate.
    pub fn project_axial(&self, p: i32, q: i32) -> VertexId {
        self.index[&self.form.reduce(p, q)]
    }

    /// Vertex holding the class of a height-zero grid coordinate.
    pub fn project(&self, c: HexCoord) -> VertexId {
        let (p, q) = c.to_axial();
        self.project_axial(p, q)
    }

    pub fn lattice_contains(&self, p: i32, q: i32) -> bool {
        self.form.contains(p, q)
    }

    /// Maximum distance from a vertex (the torus is vertex-transitive).
    pub fn diameter(&self) -> u32 {
        self.graph
            .distances_from(&[VertexId(0)])
            .into_iter()
            .map(|d| d.expect("torus is connected"))
            .max()
            .unwrap_or(0)
    }

    /// The translation action generated by the two unit translations.
    pub fn translation_action(&self) -> GroupAction {
        let gens = [(1, 0), (0, 1)]
            .iter()
            .map(|&(dp, dq)| self.translation_by(dp, dq))
            .collect();
        GroupAction::new(&self.graph, gens).expect("translations are automorphisms")
    }

    /// The vertex permutation translating by an axial vector.
    pub fn translation_by(&self, dp: i32, dq: i32) -> Vec<VertexId> {
        self.reps
            .iter()
            .map(|&(p, q)| self.project_axial(p + dp, q + dq))
            .collect()
    }
}

/// Quotient of the grid by the lattice spanned by the basis. Rejected when
/// some nonzero lattice vector has graph norm below four, since then the
/// quotient would fail to be simple and locally cyclic.
pub fn torus_graph(spec: &TorusSpec) -> Result<Torus, HexError> {
    let form = LatticeForm::from_basis(spec.basis)?;
    // any vector of norm <= 3 in the lattice invalidates the quotient
    for p in -3..=3i32 {
        for q in -3..=3i32 {
            if (p, q) == (0, 0) {
                continue;
            }
            let norm = HexCoord::from_axial(p, q).norm();
            if norm <= 3 && form.contains(p, q) {
                return Err(HexError::NormTooSmall(norm));
            }
        }
    }
    let mut reps = Vec::with_capacity(form.point_count());
    for p in 0..form.d1 {
        for q in 0..form.d2 {
            reps.push((p, q));
        }
    }
    let mut index = FxHashMap::default();
    for (i, &r) in reps.iter().enumerate() {
        index.insert(r, VertexId(i as u32));
    }
    let axial_dirs = [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)];
    let mut edges = Vec::new();
    for (i, &(p, q)) in reps.iter().enumerate() {
        for &(dp, dq) in &axial_dirs {
            let j = index[&form.reduce(p + dp, q + dq)];
            if (i as u32) < j.0 {
                edges.push((i as u32, j.0));
            }
        }
    }
    let labels = reps.iter().map(|&(p, q)| serde_json::json!([p, q])).collect();
    let graph = Graph::new(reps.len(), &edges)?.with_labels(labels);
    debug_assert!(graph.vertices().all(|v| graph.degree(v) == 6));
    Ok(Torus { spec: spec.clone(), graph, reps, form, index })
}

/// Vertex map from a height-zero window onto a torus, reducing coordinates
/// modulo the lattice. A covering map away from the window rim.
pub fn window_to_torus_map(window: &HexWindow, torus: &Torus) -> Result<Vec<VertexId>, HexError> {
    let height = HexCoord(window.spec.center[0], window.spec.center[1], window.spec.center[2]).height();
    if height != 0 {
        return Err(HexError::HeightMismatch(height, 0));
    }
    Ok(window.coords.iter().map(|&c| torus.project(c)).collect())
}

/// Vertex map between two tori when the cover's lattice refines the base's.
pub fn torus_to_torus_map(cover: &Torus, base: &Torus) -> Option<Vec<VertexId>> {
    for row in cover.spec.basis {
        if !base.lattice_contains(row[0], row[1]) {
            return None;
        }
    }
    Some(cover.reps.iter().map(|&(p, q)| base.project_axial(p, q)).collect())
}

/// Deck translations of a torus-to-torus cover: the base basis vectors
/// acting on the cover.
pub fn deck_translations(cover: &Torus, base_spec: &TorusSpec) -> GroupAction {
    let gens = base_spec
        .basis
        .iter()
        .map(|row| cover.translation_by(row[0], row[1]))
        .collect();
    GroupAction::new(&cover.graph, gens).expect("lattice translations are automorphisms")
}

/// A planar triangulation window with one apex of the given degree and all
/// other interior vertices of degree six, built from `degree` lattice wedges
/// glued cyclically around the apex.
#[derive(Debug, Clone)]
pub struct ConeLattice {
    pub graph: Graph,
    pub apex: VertexId,
    pub degree: u32,
    pub radius: u32,
    /// Wedge coordinates `(wedge, a, b)` per vertex; the apex carries `(0,0,0)`.
    pub coords: Vec<(u32, u32, u32)>,
}

pub fn cone_lattice(degree: u32, radius: u32) -> Result<ConeLattice, HexError> {
    if degree < 6 || radius < 1 {
        return Err(HexError::BadConeParameters(degree, radius));
    }
    let d = degree as i64;
    let r = radius as i64;
    // canonical vertices: apex, then (k, a, b) with a >= 1, b >= 0, a + b <= r
    let mut coords: Vec<(u32, u32, u32)> = vec![(0, 0, 0)];
    let mut index: FxHashMap<(i64, i64, i64), u32> = FxHashMap::default();
    for k in 0..d {
        for a in 1..=r {
            for b in 0..=(r - a) {
                index.insert((k, a, b), coords.len() as u32);
                coords.push((k as u32, a as u32, b as u32));
            }
        }
    }
    let canon = |k: i64, a: i64, b: i64| -> Option<u32> {
        // fold wedge-local coordinates into the canonical domain
        let (k, a, b) = if a == 0 && b == 0 {
            return Some(0);
        } else if a == 0 {
            ((k + 1).rem_euclid(d), b, 0)
        } else if b == -1 {
            ((k - 1).rem_euclid(d), 1, a - 1)
        } else {
            (k.rem_euclid(d), a, b)
        };
        if a + b > r {
            None
        } else {
            Some(*index.get(&(k, a, b)).expect("canonical wedge coordinate"))
        }
    };
    let mut edges = Vec::new();
    for k in 0..d {
        // apex spokes
        if let Some(j) = canon(k, 1, 0) {
            edges.push((0, j));
        }
        for a in 1..=r {
            for b in 0..=(r - a) {
                let i = index[&(k, a, b)];
                for (da, db) in [(1, 0), (0, 1), (1, -1), (-1, 1)] {
                    if let Some(j) = canon(k, a + da, b + db) {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    let labels = coords
        .iter()
        .map(|&(k, a, b)| serde_json::json!([k, a, b]))
        .collect();
    let graph = Graph::new(coords.len(), &edges)?.with_labels(labels);
    Ok(ConeLattice { graph, apex: VertexId(0), degree, radius, coords })
}
