//! Graph isomorphism with verifiable witnesses, equivariant isomorphism,
//! the covering-quotient realisation of the level graphs of a torus, the
//! explicit level-to-clique map, and the structure oracle that plays the
//! clique-iteration route against the shape-quotient route.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::cliques::{clique_graph, iterate_clique_graph, CliqueGraph, DEFAULT_VERTEX_BUDGET};
use crate::graph::{Graph, VertexId};
use crate::hexgeo::{hex_window, Torus, TorusSpec, WindowSpec};
use crate::trishapes::{
    geo_clique_graph, geo_from_parts, GeoCliqueGraph, ShapeCatalogue, TriShape,
};

/// Backtracking refuses graphs beyond this size.
pub const DEFAULT_SIZE_CAP: usize = 100_000;

/// Orbit representatives in the covering window must sit at least this far
/// from the rim for their level-graph neighbourhoods to be complete.
const REP_MARGIN: u32 = 6;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("graph with {0} vertices exceeds the isomorphism size cap {1}")]
    TooLarge(usize, usize),
    #[error("generator lists must pair up ({0} vs {1})")]
    GeneratorMismatch(usize, usize),
    #[error("window shape projects non-injectively; level too large for this torus")]
    NonInjectiveProjection,
    #[error("covering window too small: an orbit representative has rim distance {0}")]
    WindowTooSmall(u32),
}

/// An isomorphism witness: the vertex bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub map: Vec<VertexId>,
}

/// Re-checks a witness from scratch: bijection plus adjacency preserved in
/// both directions.
pub fn verify_witness(g: &Graph, h: &Graph, witness: &IsoWitness) -> bool {
    let n = g.vertex_count();
    if h.vertex_count() != n || witness.map.len() != n || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in &witness.map {
        if w.index() >= n || seen[w.index()] {
            return false;
        }
        seen[w.index()] = true;
    }
    g.edges().all(|(u, v)| h.has_edge(witness.map[u.index()], witness.map[v.index()]))
}

/// Joint colour refinement. Returns per-graph colours, or `None` when the
/// colour histograms separate the graphs.
fn joint_refinement(g: &Graph, h: &Graph) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = g.vertex_count();
    let mut cg = vec![0u32; n];
    let mut ch = vec![0u32; n];
    let mut colour_count = 1usize;
    loop {
        let sig = |graph: &Graph, colours: &[u32], v: VertexId| {
            let mut nbrs: Vec<u32> = graph.neighbors(v).iter().map(|u| colours[u.index()]).collect();
            nbrs.sort_unstable();
            (colours[v.index()], nbrs)
        };
        let mut dictionary: BTreeMap<(u32, Vec<u32>), u32> = BTreeMap::new();
        for v in g.vertices() {
            dictionary.entry(sig(g, &cg, v)).or_insert(0);
        }
        for v in h.vertices() {
            dictionary.entry(sig(h, &ch, v)).or_insert(0);
        }
        for (i, (_, id)) in dictionary.iter_mut().enumerate() {
            *id = i as u32;
        }
        let next_g: Vec<u32> = g.vertices().map(|v| dictionary[&sig(g, &cg, v)]).collect();
        let next_h: Vec<u32> = h.vertices().map(|v| dictionary[&sig(h, &ch, v)]).collect();
        let mut hist_g = vec![0usize; dictionary.len()];
        let mut hist_h = vec![0usize; dictionary.len()];
        for &c in &next_g {
            hist_g[c as usize] += 1;
        }
        for &c in &next_h {
            hist_h[c as usize] += 1;
        }
        if hist_g != hist_h {
            return None;
        }
        let stable = dictionary.len() == colour_count;
        colour_count = dictionary.len();
        cg = next_g;
        ch = next_h;
        if stable {
            return Some((cg, ch));
        }
    }
}

struct IsoSearch<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: Vec<u32>,
    ch: Vec<u32>,
    fwd: Vec<Option<VertexId>>,
    bwd: Vec<Option<VertexId>>,
}

impl<'a> IsoSearch<'a> {
    /// The next vertex to branch on: most mapped neighbours, then smallest
    /// colour class, then id.
    fn pick(&self) -> Option<VertexId> {
        let mut class_size = vec![0usize; self.cg.iter().max().map(|&c| c as usize + 1).unwrap_or(1)];
        for &c in &self.cg {
            class_size[c as usize] += 1;
        }
        self.g
            .vertices()
            .filter(|v| self.fwd[v.index()].is_none())
            .min_by_key(|&v| {
                let mapped = self
                    .g
                    .neighbors(v)
                    .iter()
                    .filter(|u| self.fwd[u.index()].is_some())
                    .count();
                (usize::MAX - mapped, class_size[self.cg[v.index()] as usize], v.0)
            })
    }

    fn feasible(&self, v: VertexId, w: VertexId) -> bool {
        if self.cg[v.index()] != self.ch[w.index()] {
            return false;
        }
        let mut mapped_v = 0usize;
        for &u in self.g.neighbors(v) {
            if let Some(wu) = self.fwd[u.index()] {
                if !self.h.has_edge(wu, w) {
                    return false;
                }
                mapped_v += 1;
            }
        }
        let mapped_w = self
            .h
            .neighbors(w)
            .iter()
            .filter(|x| self.bwd[x.index()].is_some())
            .count();
        mapped_v == mapped_w
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.g.vertex_count() {
            return true;
        }
        let v = self.pick().expect("an unmapped vertex remains");
        for w in self.h.vertices() {
            if self.bwd[w.index()].is_some() || !self.feasible(v, w) {
                continue;
            }
            self.fwd[v.index()] = Some(w);
            self.bwd[w.index()] = Some(v);
            if self.run(depth + 1) {
                return true;
            }
            self.fwd[v.index()] = None;
            self.bwd[w.index()] = None;
        }
        false
    }
}

/// Isomorphism test with witness: colour refinement first, then
/// deterministic backtracking.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<Option<IsoWitness>, IsoError> {
    are_isomorphic_capped(g, h, DEFAULT_SIZE_CAP)
}

pub fn are_isomorphic_capped(
    g: &Graph,
    h: &Graph,
    cap: usize,
) -> Result<Option<IsoWitness>, IsoError> {
    if g.vertex_count() > cap || h.vertex_count() > cap {
        return Err(IsoError::TooLarge(g.vertex_count().max(h.vertex_count()), cap));
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    if g.vertex_count() == 0 {
        return Ok(Some(IsoWitness { map: Vec::new() }));
    }
    let Some((cg, ch)) = joint_refinement(g, h) else {
        return Ok(None);
    };
    let mut search = IsoSearch {
        g,
        h,
        cg,
        ch,
        fwd: vec![None; g.vertex_count()],
        bwd: vec![None; h.vertex_count()],
    };
    if search.run(0) {
        let map: Vec<VertexId> = search.fwd.iter().map(|m| m.unwrap()).collect();
        let witness = IsoWitness { map };
        debug_assert!(verify_witness(g, h, &witness));
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

struct GammaSearch<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: Vec<u32>,
    ch: Vec<u32>,
    gens_g: &'a [Vec<VertexId>],
    gens_h: &'a [Vec<VertexId>],
    fwd: Vec<Option<VertexId>>,
    bwd: Vec<Option<VertexId>>,
}

impl<'a> GammaSearch<'a> {
    /// Assigns `v -> w` and everything equivariance forces from it; returns
    /// the trail of assignments for rollback, or `None` on conflict.
    fn propagate(&mut self, v: VertexId, w: VertexId) -> Option<Vec<VertexId>> {
        let mut trail = Vec::new();
        let mut stack = vec![(v, w)];
        while let Some((v, w)) = stack.pop() {
            match self.fwd[v.index()] {
                Some(existing) => {
                    if existing != w {
                        self.rollback(&trail);
                        return None;
                    }
                    continue;
                }
                None => {
                    if self.bwd[w.index()].is_some() || !self.feasible(v, w) {
                        self.rollback(&trail);
                        return None;
                    }
                    self.fwd[v.index()] = Some(w);
                    self.bwd[w.index()] = Some(v);
                    trail.push(v);
                    for (pg, ph) in self.gens_g.iter().zip(self.gens_h) {
                        stack.push((pg[v.index()], ph[w.index()]));
                    }
                }
            }
        }
        Some(trail)
    }

    fn rollback(&mut self, trail: &[VertexId]) {
        for &v in trail {
            let w = self.fwd[v.index()].take().unwrap();
            self.bwd[w.index()] = None;
        }
    }

    fn feasible(&self, v: VertexId, w: VertexId) -> bool {
        if self.cg[v.index()] != self.ch[w.index()] {
            return false;
        }
        let mut mapped_v = 0usize;
        for &u in self.g.neighbors(v) {
            if let Some(wu) = self.fwd[u.index()] {
                if !self.h.has_edge(wu, w) {
                    return false;
                }
                mapped_v += 1;
            }
        }
        let mapped_w = self
            .h
            .neighbors(w)
            .iter()
            .filter(|x| self.bwd[x.index()].is_some())
            .count();
        mapped_v == mapped_w
    }

    fn run(&mut self) -> bool {
        let v = match self.g.vertices().find(|v| self.fwd[v.index()].is_none()) {
            None => return true,
            Some(v) => v,
        };
        for w in self.h.vertices() {
            if self.bwd[w.index()].is_some() {
                continue;
            }
            if let Some(trail) = self.propagate(v, w) {
                if self.run() {
                    return true;
                }
                self.rollback(&trail);
            }
        }
        false
    }
}

/// Equivariant isomorphism: a witness `φ` with `φ(γ v) = γ' φ(v)` for every
/// paired generator `(γ, γ')`.
pub fn are_gamma_isomorphic(
    g: &Graph,
    h: &Graph,
    gens_g: &[Vec<VertexId>],
    gens_h: &[Vec<VertexId>],
) -> Result<Option<IsoWitness>, IsoError> {
    if gens_g.len() != gens_h.len() {
        return Err(IsoError::GeneratorMismatch(gens_g.len(), gens_h.len()));
    }
    if g.vertex_count() > DEFAULT_SIZE_CAP {
        return Err(IsoError::TooLarge(g.vertex_count(), DEFAULT_SIZE_CAP));
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let Some((cg, ch)) = joint_refinement(g, h) else {
        return Ok(None);
    };
    let mut search = GammaSearch {
        g,
        h,
        cg,
        ch,
        gens_g,
        gens_h,
        fwd: vec![None; g.vertex_count()],
        bwd: vec![None; h.vertex_count()],
    };
    if search.run() {
        let map: Vec<VertexId> = search.fwd.iter().map(|m| m.unwrap()).collect();
        let witness = IsoWitness { map };
        debug_assert!(verify_witness(g, h, &witness));
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Covering-quotient level graphs of a torus
// ---------------------------------------------------------------------------

/// The level graph of the torus realised through its covering lattice:
/// shapes are enumerated over a window of the grid large enough that every
/// translation orbit has a deep representative, and the orbit quotient is
/// read off the window's level graph. Shape data is carried on torus
/// vertices.
pub fn quotient_geo_clique_graph(torus: &Torus, level: u32) -> Result<GeoCliqueGraph, IsoError> {
    let radius = torus.diameter() + level + 10;
    let window = hex_window(&WindowSpec { center: [0, 0, 0], radius });
    let wgeo = geo_clique_graph(&window.graph, level);

    // orbit key: the projected (side, torus vertex set)
    let mut orbit_of_window_shape: Vec<(u32, Vec<VertexId>)> =
        Vec::with_capacity(wgeo.catalogue.len());
    for shape in &wgeo.catalogue.shapes {
        let mut projected: Vec<VertexId> = shape
            .verts
            .iter()
            .map(|&v| torus.project(window.coords[v.index()]))
            .collect();
        projected.sort_unstable();
        projected.dedup();
        if projected.len() != shape.verts.len() {
            return Err(IsoError::NonInjectiveProjection);
        }
        orbit_of_window_shape.push((shape.side, projected));
    }

    // deepest representative per orbit
    let mut reps: FxHashMap<&(u32, Vec<VertexId>), u32> = FxHashMap::default();
    for (i, key) in orbit_of_window_shape.iter().enumerate() {
        let entry = reps.entry(key).or_insert(i as u32);
        if wgeo.shape_rim_distance(i as u32) > wgeo.shape_rim_distance(*entry) {
            *entry = i as u32;
        }
    }
    let mut orbit_keys: Vec<&(u32, Vec<VertexId>)> = reps.keys().copied().collect();
    orbit_keys.sort_unstable();
    let orbit_id: FxHashMap<&(u32, Vec<VertexId>), u32> = orbit_keys
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i as u32))
        .collect();

    let mut shapes = Vec::with_capacity(orbit_keys.len());
    for &key in &orbit_keys {
        let rep = reps[key];
        if wgeo.shape_rim_distance(rep) < REP_MARGIN {
            return Err(IsoError::WindowTooSmall(wgeo.shape_rim_distance(rep)));
        }
        let window_shape = &wgeo.catalogue.shapes[rep as usize];
        let chart: Vec<VertexId> = window_shape
            .chart
            .iter()
            .map(|&v| torus.project(window.coords[v.index()]))
            .collect();
        shapes.push(TriShape { side: key.0, verts: key.1.clone(), chart });
    }
    let catalogue = ShapeCatalogue::from_shapes(torus.graph.vertex_count(), shapes);

    // quotient edges from the representatives' complete window neighbourhoods
    let mut incident: Vec<Vec<(u32, u8)>> = vec![Vec::new(); wgeo.catalogue.len()];
    for &(a, b, gap) in &wgeo.edge_types {
        incident[a as usize].push((b, gap));
        incident[b as usize].push((a, gap));
    }
    let mut edge_types = Vec::new();
    for &key in &orbit_keys {
        let rep = reps[key];
        let a = orbit_id[key];
        for &(nbr, gap) in &incident[rep as usize] {
            let b = orbit_id[&orbit_of_window_shape[nbr as usize]];
            if a != b {
                edge_types.push((a.min(b), a.max(b), gap));
            }
        }
    }
    Ok(geo_from_parts(&torus.graph, level, catalogue, edge_types))
}

// ---------------------------------------------------------------------------
// The explicit map C_{n+1} from a level graph to the clique graph below it
// ---------------------------------------------------------------------------

/// Image of one shape under the level map, split into its parts.
#[derive(Debug, Clone)]
pub struct CImage {
    /// The three aligned one-smaller sub-shapes (empty for side zero).
    pub part_minus1: Vec<u32>,
    /// One-larger shapes holding this shape in a corner (the incident
    /// triangles, for side zero).
    pub part_plus1: Vec<u32>,
    /// Three-larger shapes enclosing this shape at distance one.
    pub part_plus3: Vec<u32>,
    /// The side-dependent extra term (inverted enclosure, central inverted
    /// triangle, or eroded core).
    pub part_case: Vec<u32>,
    /// Sorted union of all parts: the image clique in the lower level graph.
    pub clique: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct ExplicitCMap {
    pub upper_level: u32,
    /// Per upper shape; `None` when the shape was flagged unclassifiable.
    pub images: Vec<Option<CImage>>,
    pub skipped: Vec<(u32, String)>,
}

impl ExplicitCMap {
    pub fn classified(&self) -> Vec<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|(_, image)| image.is_some())
            .map(|(i, _)| i as u32)
            .collect()
    }
}

/// Builds the image clique of every upper shape out of chart arithmetic on
/// the lower catalogue. Shapes closer than `margin` to the host rim are
/// flagged rather than given possibly clipped images.
pub fn explicit_c_map(
    upper: &GeoCliqueGraph,
    lower: &GeoCliqueGraph,
    host: &Graph,
    margin: u32,
) -> ExplicitCMap {
    assert_eq!(upper.level, lower.level + 1, "levels must be consecutive");
    let n = lower.level;
    let mut images = Vec::with_capacity(upper.catalogue.len());
    let mut skipped = Vec::new();
    for (id, shape) in upper.catalogue.shapes.iter().enumerate() {
        let id = id as u32;
        if upper.shape_rim_distance(id) < margin {
            skipped.push((id, "within the window margin".to_string()));
            images.push(None);
            continue;
        }
        match c_image(shape, lower, host, n) {
            Ok(image) => images.push(Some(image)),
            Err(reason) => {
                skipped.push((id, reason));
                images.push(None);
            }
        }
    }
    ExplicitCMap { upper_level: upper.level, images, skipped }
}

fn c_image(
    shape: &TriShape,
    lower: &GeoCliqueGraph,
    host: &Graph,
    n: u32,
) -> Result<CImage, String> {
    let cat = &lower.catalogue;
    let m = shape.side;
    let mut image = CImage {
        part_minus1: Vec::new(),
        part_plus1: Vec::new(),
        part_plus3: Vec::new(),
        part_case: Vec::new(),
        clique: Vec::new(),
    };
    if m == 0 {
        let v = shape.verts[0];
        image.part_plus1 = cat.shapes_of_side_containing(1, v).to_vec();
        if n >= 3 {
            for &t in cat.shapes_of_side_containing(3, v) {
                if cat.shapes[t as usize].interior_hosts() == shape.verts {
                    image.part_plus3.push(t);
                }
            }
        }
    } else {
        for sub in corner_subshapes(shape) {
            match cat.find(m - 1, &sub) {
                Some(t) => image.part_minus1.push(t),
                None => return Err(format!("aligned sub-shape of side {} not catalogued", m - 1)),
            }
        }
        if m < n {
            image.part_plus1 = supershapes_with_corner(shape, cat, m + 1);
        }
        if m + 3 <= n {
            for t in containing_candidates(shape, cat, m + 3) {
                if cat.shapes[t as usize].interior_hosts() == shape.verts {
                    image.part_plus3.push(t);
                }
            }
        }
        match m {
            1 => {
                if n >= 2 {
                    let inverted = inverted_enclosure(shape, host)?;
                    match cat.find(2, &inverted) {
                        Some(t) => image.part_case.push(t),
                        None => return Err("inverted enclosure not catalogued".to_string()),
                    }
                }
            }
            2 => {
                let verts = central_inverted_triangle(shape);
                match cat.find(1, &verts) {
                    Some(t) => image.part_case.push(t),
                    None => return Err("central inverted triangle not catalogued".to_string()),
                }
            }
            _ => {
                let core = shape.interior_hosts();
                match cat.find(m - 3, &core) {
                    Some(t) => image.part_case.push(t),
                    None => return Err(format!("eroded core of side {} not catalogued", m - 3)),
                }
            }
        }
    }
    image.clique = image
        .part_minus1
        .iter()
        .chain(&image.part_plus1)
        .chain(&image.part_plus3)
        .chain(&image.part_case)
        .copied()
        .collect();
    image.clique.sort_unstable();
    image.clique.dedup();
    Ok(image)
}

/// Vertex sets of the three aligned sub-shapes of one smaller side: the
/// chart positions with the given coordinate at least one.
fn corner_subshapes(shape: &TriShape) -> [Vec<VertexId>; 3] {
    let coords = crate::hexgeo::delta_coords(shape.side);
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for (i, c) in coords.iter().enumerate() {
        for (axis, bucket) in out.iter_mut().enumerate() {
            let component = match axis {
                0 => c.0,
                1 => c.1,
                _ => c.2,
            };
            if component >= 1 {
                bucket.push(shape.chart[i]);
            }
        }
    }
    for bucket in &mut out {
        bucket.sort_unstable();
    }
    out
}

/// Lower shapes of the given side containing all three corners of `shape`.
fn containing_candidates(shape: &TriShape, cat: &ShapeCatalogue, side: u32) -> Vec<u32> {
    if !cat.has_side(side) {
        return Vec::new();
    }
    let corners = shape.corner_hosts();
    let mut result: Option<Vec<u32>> = None;
    for &c in &corners {
        let list = cat.shapes_of_side_containing(side, c).to_vec();
        result = Some(match result {
            None => list,
            Some(prev) => prev.into_iter().filter(|x| list.binary_search(x).is_ok()).collect(),
        });
    }
    result.unwrap_or_default()
}

/// One-larger shapes holding `shape` as an aligned corner sub-shape.
fn supershapes_with_corner(shape: &TriShape, cat: &ShapeCatalogue, side: u32) -> Vec<u32> {
    containing_candidates(shape, cat, side)
        .into_iter()
        .filter(|&t| corner_subshapes(&cat.shapes[t as usize]).contains(&shape.verts))
        .collect()
}

/// For a side-one shape, the inverted one-larger enclosure: the triangle's
/// vertices together with the outer common neighbour of each of its edges.
/// Exists and is unique over interior regions of degree at least six.
fn inverted_enclosure(shape: &TriShape, host: &Graph) -> Result<Vec<VertexId>, String> {
    let [a, b, c] = [shape.chart[0], shape.chart[1], shape.chart[2]];
    let mut verts = shape.verts.clone();
    for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
        let outer: Vec<VertexId> = host
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&w| w != z && host.has_edge(w, y))
            .collect();
        match outer.as_slice() {
            [o] => verts.push(*o),
            _ => {
                return Err(format!(
                    "edge ({x}, {y}) has {} outer completions instead of one",
                    outer.len()
                ))
            }
        }
    }
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != 6 {
        return Err("inverted enclosure degenerates".to_string());
    }
    Ok(verts)
}

/// The central inverted triangle of a side-two shape.
fn central_inverted_triangle(shape: &TriShape) -> Vec<VertexId> {
    let coords = crate::hexgeo::delta_coords(2);
    let mut verts: Vec<VertexId> = crate::hexgeo::NABLA_1
        .iter()
        .map(|c| {
            let pos = coords.iter().position(|x| x == c).unwrap();
            shape.chart[pos]
        })
        .collect();
    verts.sort_unstable();
    verts
}

/// Outcome of the four checks on an explicit level map.
#[derive(Debug, Clone)]
pub struct CVerifyReport {
    pub checked: usize,
    pub images_are_maximal_cliques: bool,
    pub injective: bool,
    pub adjacency_preserved: bool,
    pub part_sizes_ok: bool,
    pub failures: Vec<String>,
}

impl CVerifyReport {
    pub fn ok(&self) -> bool {
        self.images_are_maximal_cliques
            && self.injective
            && self.adjacency_preserved
            && self.part_sizes_ok
    }
}

/// Verifies a level map against the clique graph of the lower level:
/// images are maximal cliques, the induced vertex map is injective,
/// adjacency transfers both ways on the classified region, and the part
/// sizes match their closed forms (sizes are only asserted on rimless
/// hosts; windows report observations).
pub fn verify_c(
    upper: &GeoCliqueGraph,
    lower: &GeoCliqueGraph,
    kg_lower: &CliqueGraph,
    map: &ExplicitCMap,
    host: &Graph,
) -> CVerifyReport {
    let mut report = CVerifyReport {
        checked: 0,
        images_are_maximal_cliques: true,
        injective: true,
        adjacency_preserved: true,
        part_sizes_ok: true,
        failures: Vec::new(),
    };
    let safe = map.classified();
    report.checked = safe.len();
    let n = lower.level;
    let rimless = lower.host_rim_distance.iter().all(|&d| d == u32::MAX);

    let mut into_kg: FxHashMap<u32, VertexId> = FxHashMap::default();
    for &s in &safe {
        let image = map.images[s as usize].as_ref().unwrap();
        let clique: Vec<VertexId> = image.clique.iter().map(|&x| VertexId(x)).collect();
        match kg_lower.find(&clique) {
            Some(q) => {
                into_kg.insert(s, q);
            }
            None => {
                report.images_are_maximal_cliques = false;
                report
                    .failures
                    .push(format!("image of shape {s} is not a maximal clique of the level below"));
            }
        }
    }

    let mut seen: FxHashMap<VertexId, u32> = FxHashMap::default();
    for (&s, &q) in &into_kg {
        if let Some(&other) = seen.get(&q) {
            report.injective = false;
            report.failures.push(format!("shapes {other} and {s} share the image clique"));
        } else {
            seen.insert(q, s);
        }
    }

    for (ai, &a) in safe.iter().enumerate() {
        for &b in safe.iter().skip(ai + 1) {
            let upper_edge = upper.graph.has_edge(VertexId(a), VertexId(b));
            let (ia, ib) = (
                map.images[a as usize].as_ref().unwrap(),
                map.images[b as usize].as_ref().unwrap(),
            );
            let meet = ia.clique.iter().any(|x| ib.clique.binary_search(x).is_ok());
            if upper_edge != meet {
                report.adjacency_preserved = false;
                report.failures.push(format!(
                    "adjacency mismatch between shapes {a} and {b}: edge {upper_edge}, images meet {meet}"
                ));
            }
        }
    }

    for &s in &safe {
        let shape = &upper.catalogue.shapes[s as usize];
        let image = map.images[s as usize].as_ref().unwrap();
        let m = shape.side;
        let mut expect = |label: &str, got: usize, want: usize| {
            if got != want {
                report.part_sizes_ok = false;
                report
                    .failures
                    .push(format!("shape {s} (side {m}): |{label}| = {got}, expected {want}"));
            }
        };
        if m == 0 {
            let deg = host.degree(shape.verts[0]);
            expect("incident triangles", image.part_plus1.len(), deg);
            if rimless {
                let want = if deg == 6 && n >= 3 { 2 } else { 0 };
                expect("central enclosures", image.part_plus3.len(), want);
            }
        } else {
            expect("aligned sub-shapes", image.part_minus1.len(), 3);
            if rimless {
                let want_plus1 = if m < n { 3 } else { 0 };
                expect("corner super-shapes", image.part_plus1.len(), want_plus1);
                let want_plus3 = if m + 3 <= n { 1 } else { 0 };
                expect("distance-one enclosures", image.part_plus3.len(), want_plus3);
                let want_case = match m {
                    1 => usize::from(n >= 2),
                    _ => 1,
                };
                expect("case term", image.part_case.len(), want_case);
            }
        }
    }
    report
}

/// Turns a verified level map into a vertex map into the clique graph.
pub fn c_map_as_vertex_map(map: &ExplicitCMap, kg_lower: &CliqueGraph) -> Option<Vec<VertexId>> {
    map.images
        .iter()
        .map(|image| {
            let image = image.as_ref()?;
            let clique: Vec<VertexId> = image.clique.iter().map(|&x| VertexId(x)).collect();
            kg_lower.find(&clique)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Structure oracle
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct StructureReport {
    pub level: u32,
    pub clique_route_vertices: usize,
    pub quotient_route_vertices: usize,
    pub witness: Option<IsoWitness>,
    pub pass: bool,
}

/// Plays the two routes to the `n`-th clique graph of a torus against each
/// other: clique iteration versus the covering-quotient level graph. Passes
/// only with a verified isomorphism witness.
pub fn verify_structure(spec: &TorusSpec, level: u32) -> Result<StructureReport, StructureError> {
    let torus = crate::hexgeo::torus_graph(spec)?;
    let clique_route: Graph = if level == 0 {
        torus.graph.clone()
    } else {
        let it = iterate_clique_graph(&torus.graph, level, DEFAULT_VERTEX_BUDGET);
        if it.budget_hit {
            return Err(StructureError::Budget);
        }
        it.levels.last().unwrap().graph.clone()
    };
    let quotient_route = quotient_geo_clique_graph(&torus, level)?;
    let witness = are_isomorphic(&clique_route, &quotient_route.graph)?;
    let pass = witness
        .as_ref()
        .map(|w| verify_witness(&clique_route, &quotient_route.graph, w))
        .unwrap_or(false);
    Ok(StructureReport {
        level,
        clique_route_vertices: clique_route.vertex_count(),
        quotient_route_vertices: quotient_route.graph.vertex_count(),
        witness,
        pass,
    })
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Hex(#[from] crate::hexgeo::HexError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("clique iteration exceeded its vertex budget")]
    Budget,
    #[error("a level-map image is not a clique of the iterate below")]
    BadImage,
}

/// The chained level maps `G_n -> k G_{n-1} -> k^2 G_{n-2} -> ... -> k^n G_0`,
/// verified as a single isomorphism. Each link is the level map pushed
/// through the clique operator the right number of times.
pub fn psi_chain(torus: &Torus, level: u32) -> Result<Option<IsoWitness>, StructureError> {
    assert!(level >= 1);
    let mut geos = Vec::new();
    for l in 0..=level {
        geos.push(quotient_geo_clique_graph(torus, l)?);
    }
    let top = &geos[level as usize].graph;
    let mut composed: Vec<VertexId> = top.vertices().collect();
    let mut codomain: Graph = top.clone();
    for l in (1..=level).rev() {
        let map = explicit_c_map(&geos[l as usize], &geos[l as usize - 1], &torus.graph, 0);
        let kg_lower = clique_graph(&geos[l as usize - 1].graph);
        let Some(mut link) = c_map_as_vertex_map(&map, &kg_lower) else {
            return Ok(None);
        };
        // push C_l: G_l -> kG_{l-1} through the operator (level - l) times
        let mut domain = geos[l as usize].graph.clone();
        let mut image = kg_lower.graph.clone();
        for _ in 0..(level - l) {
            let kg_domain = clique_graph(&domain);
            let kg_image = clique_graph(&image);
            link = crate::cliques::map_pk(&link, &kg_domain, &kg_image)
                .map_err(|_| StructureError::BadImage)?;
            domain = kg_domain.graph;
            image = kg_image.graph;
        }
        debug_assert_eq!(domain.vertex_count(), codomain.vertex_count());
        composed = composed.iter().map(|&v| link[v.index()]).collect();
        codomain = image;
    }
    // the codomain is now the independent clique iterate of the bottom level
    let mut expected = geos[0].graph.clone();
    for _ in 0..level {
        expected = clique_graph(&expected).graph;
    }
    debug_assert_eq!(codomain, expected);
    let witness = IsoWitness { map: composed };
    let ok = verify_witness(top, &expected, &witness);
    Ok(ok.then_some(witness))
}
