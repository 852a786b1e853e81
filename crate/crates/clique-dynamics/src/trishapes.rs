//! Triangular-shaped subgraphs, the geometric clique graph with its typed
//! adjacencies, the degree-26 census and the distance invariant built on it.
//!
//! A shape is identified by its side length and sorted vertex set; the six
//! charts related by a template symmetry are collapsed. One representative
//! chart is kept so that boundaries, interiors and corners can be read off
//! coordinates.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::graph::{Graph, LocallyCyclicReport, VertexId};
use crate::hexgeo::{delta_coords, delta_index, HexCoord};

/// A triangular-shaped subgraph of a host graph.
#[derive(Debug, Clone)]
pub struct TriShape {
    pub side: u32,
    /// Sorted image vertex set; together with `side` this is the shape's
    /// identity.
    pub verts: Vec<VertexId>,
    /// Representative chart: host images of the template coordinates in
    /// row-major order.
    pub chart: Vec<VertexId>,
}

impl TriShape {
    fn from_chart(side: u32, chart: Vec<VertexId>) -> TriShape {
        let mut verts = chart.clone();
        verts.sort_unstable();
        TriShape { side, verts, chart }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    /// Host vertices of the template boundary (coordinates with a zero
    /// entry), sorted. Well defined: symmetries preserve the boundary.
    pub fn boundary_hosts(&self) -> Vec<VertexId> {
        self.collect_positions(|c| c.0 == 0 || c.1 == 0 || c.2 == 0)
    }

    /// Host vertices with all template coordinates at least one, sorted.
    pub fn interior_hosts(&self) -> Vec<VertexId> {
        self.collect_positions(|c| c.0 >= 1 && c.1 >= 1 && c.2 >= 1)
    }

    /// The three corner host vertices (coinciding for side zero).
    pub fn corner_hosts(&self) -> [VertexId; 3] {
        let m = self.side;
        [
            self.chart[0],
            self.chart[delta_index(m, 0)],
            self.chart[delta_index(m, m)],
        ]
    }

    fn collect_positions(&self, pred: impl Fn(HexCoord) -> bool) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = delta_coords(self.side)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| pred(*c))
            .map(|(i, _)| self.chart[i])
            .collect();
        out.sort_unstable();
        out
    }

    /// Shape edges as sorted host pairs, from the representative chart.
    pub fn edge_pairs(&self, edge_positions: &[(u32, u32)]) -> Vec<(VertexId, VertexId)> {
        edge_positions
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (self.chart[a as usize], self.chart[b as usize]);
                (u.min(v), u.max(v))
            })
            .collect()
    }

    /// Orientation of the representative chart within a coordinate-labelled
    /// window: `+1` when the chart preserves the lattice orientation, `-1`
    /// when it reverses it. Only meaningful for hosts carrying coordinates.
    pub fn orientation_in(&self, coord_of: impl Fn(VertexId) -> Option<HexCoord>) -> Option<i8> {
        if self.side == 0 {
            return Some(1);
        }
        let a = coord_of(self.chart[0])?;
        let b = coord_of(self.chart[1])?;
        let c = coord_of(self.chart[2])?;
        let (u, v) = (b - a, c - a);
        let det = (u.0 * v.1 - u.1 * v.0) as i64;
        match det.signum() {
            1 => Some(1),
            -1 => Some(-1),
            _ => None,
        }
    }
}

/// Template edge list of `Δ_m` as row-major index pairs.
pub fn delta_edge_positions(m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=m {
        for j in 0..=i {
            let here = delta_index(i, j) as u32;
            if j < i {
                out.push((here, delta_index(i, j + 1) as u32));
            }
            if i < m {
                out.push((here, delta_index(i + 1, j) as u32));
                out.push((here, delta_index(i + 1, j + 1) as u32));
            }
        }
    }
    out
}

/// The catalogue of shapes found in a host, with lookup structures.
#[derive(Debug, Clone)]
pub struct ShapeCatalogue {
    pub shapes: Vec<TriShape>,
    host_vertices: usize,
    index: FxHashMap<(u32, Vec<VertexId>), u32>,
    /// `per_side[side][host vertex]` lists the shapes of that side containing
    /// the vertex, ascending.
    per_side: Vec<Vec<Vec<u32>>>,
    edge_positions: Vec<Vec<(u32, u32)>>,
}

impl ShapeCatalogue {
    pub fn from_shapes(host_vertices: usize, shapes: Vec<TriShape>) -> ShapeCatalogue {
        let max_side = shapes.iter().map(|s| s.side).max().unwrap_or(0) as usize;
        let mut index = FxHashMap::default();
        let mut per_side = vec![vec![Vec::new(); host_vertices]; max_side + 1];
        for (i, shape) in shapes.iter().enumerate() {
            index.insert((shape.side, shape.verts.clone()), i as u32);
            for &v in &shape.verts {
                per_side[shape.side as usize][v.index()].push(i as u32);
            }
        }
        let edge_positions = (0..=max_side as u32).map(delta_edge_positions).collect();
        ShapeCatalogue { shapes, host_vertices, index, per_side, edge_positions }
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn host_vertex_count(&self) -> usize {
        self.host_vertices
    }

    pub fn side(&self, shape: u32) -> u32 {
        self.shapes[shape as usize].side
    }

    pub fn find(&self, side: u32, sorted_verts: &[VertexId]) -> Option<u32> {
        self.index.get(&(side, sorted_verts.to_vec())).copied()
    }

    pub fn shapes_of_side_containing(&self, side: u32, v: VertexId) -> &[u32] {
        static EMPTY: Vec<u32> = Vec::new();
        self.per_side
            .get(side as usize)
            .map(|lists| &lists[v.index()])
            .unwrap_or(&EMPTY)
    }

    pub fn has_side(&self, side: u32) -> bool {
        (side as usize) < self.per_side.len()
            && self.per_side[side as usize].iter().any(|l| !l.is_empty())
    }

    pub fn edge_positions_for(&self, side: u32) -> &[(u32, u32)] {
        &self.edge_positions[side as usize]
    }

    /// Sides present in the catalogue, ascending.
    pub fn sides(&self) -> Vec<u32> {
        let mut sides: Vec<u32> = self.shapes.iter().map(|s| s.side).collect();
        sides.sort_unstable();
        sides.dedup();
        sides
    }

    /// Count of shapes per side.
    pub fn side_histogram(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for s in &self.shapes {
            *out.entry(s.side).or_insert(0) += 1;
        }
        out
    }
}

fn common_neighbours(host: &Graph, a: VertexId, b: VertexId) -> Vec<VertexId> {
    let (na, nb) = (host.neighbors(a), host.neighbors(b));
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < na.len() && j < nb.len() {
        match na[i].cmp(&nb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(na[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Extends a side-`m` chart by one bottom row in every possible way
/// (uniquely in locally cyclic regions). `m >= 1`.
fn extend_chart(host: &Graph, m: u32, chart: &[VertexId]) -> Vec<Vec<VertexId>> {
    let m = m as usize;
    let old = |j: usize| chart[delta_index(m as u32, j as u32)];
    let above = |j: usize| chart[delta_index(m as u32 - 1, j as u32)];
    let used: FxHashSet<VertexId> = chart.iter().copied().collect();

    // fill the new row left to right: inner entries are third vertices of
    // downward triangles on the old row, the two ends complete corner
    // triangles once their inner neighbour is known
    let mut rows: Vec<Vec<VertexId>> = vec![Vec::new()];
    for j in 1..=m {
        let mut next = Vec::new();
        for partial in rows {
            for &cand in &common_neighbours(host, old(j - 1), old(j)) {
                if cand == above(j - 1) || used.contains(&cand) || partial.contains(&cand) {
                    continue;
                }
                if j >= 2 && !host.has_edge(*partial.last().unwrap(), cand) {
                    continue;
                }
                let mut row = partial.clone();
                row.push(cand);
                next.push(row);
            }
        }
        rows = next;
        if rows.is_empty() {
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    for inner in rows {
        let left_candidates: Vec<VertexId> = common_neighbours(host, old(0), inner[0])
            .into_iter()
            .filter(|&c| c != old(1) && !used.contains(&c) && !inner.contains(&c))
            .collect();
        let right_candidates: Vec<VertexId> = common_neighbours(host, old(m), inner[m - 1])
            .into_iter()
            .filter(|&c| c != old(m - 1) && !used.contains(&c) && !inner.contains(&c))
            .collect();
        for &left in &left_candidates {
            for &right in &right_candidates {
                if left == right {
                    continue;
                }
                let mut chart = chart.to_vec();
                chart.push(left);
                chart.extend_from_slice(&inner);
                chart.push(right);
                out.push(chart);
            }
        }
    }
    out
}

/// Rotates a chart so that a different corner becomes the template apex.
/// `rotation = 1` sends coordinate positions through the cycle
/// `x1 -> x2 -> x3 -> x1`.
fn rotate_chart(m: u32, chart: &[VertexId], rotation: u8) -> Vec<VertexId> {
    if rotation == 0 {
        return chart.to_vec();
    }
    let coords = delta_coords(m);
    let mut lookup = FxHashMap::default();
    for (i, &c) in coords.iter().enumerate() {
        lookup.insert(c, i);
    }
    coords
        .iter()
        .map(|&c| {
            let rotated = match rotation {
                1 => HexCoord(c.1, c.2, c.0),
                _ => HexCoord(c.2, c.0, c.1),
            };
            chart[lookup[&rotated]]
        })
        .collect()
}

/// Enumerates every triangular-shaped subgraph of side at most `max_side`
/// with side congruent to `parity` mod 2, by seeding charts on vertices and
/// oriented triangles and extending row by row. Each shape is reported once.
pub fn enumerate_trishapes(host: &Graph, max_side: u32, parity: u8) -> ShapeCatalogue {
    let mut current: Vec<TriShape> = host
        .vertices()
        .map(|v| TriShape { side: 0, verts: vec![v], chart: vec![v] })
        .collect();
    let mut kept: Vec<TriShape> = Vec::new();
    let mut keep = |shapes: &[TriShape], side: u32| {
        if side % 2 == parity as u32 % 2 {
            kept.extend_from_slice(shapes);
        }
    };
    keep(&current, 0);
    if max_side >= 1 {
        let triangles = host.triangles();
        current = triangles
            .iter()
            .flat_map(|&[a, b, c]| {
                // two orientations per triangle seed the two chart families;
                // reflected charts carry the same shapes afterwards
                [[a, b, c], [a, c, b]]
            })
            .map(|t| TriShape::from_chart(1, t.to_vec()))
            .collect();
        current = dedupe_shapes(current);
        keep(&current, 1);
    }
    for side in 1..max_side {
        let extended: Vec<Vec<TriShape>> = current
            .par_iter()
            .map(|shape| {
                let mut found = Vec::new();
                for rotation in 0..3u8 {
                    let chart = rotate_chart(side, &shape.chart, rotation);
                    for bigger in extend_chart(host, side, &chart) {
                        found.push(TriShape::from_chart(side + 1, bigger));
                    }
                }
                found
            })
            .collect();
        current = dedupe_shapes(extended.into_iter().flatten().collect());
        keep(&current, side + 1);
        if current.is_empty() {
            break;
        }
    }
    kept.sort_by(|a, b| (a.side, &a.verts).cmp(&(b.side, &b.verts)));
    ShapeCatalogue::from_shapes(host.vertex_count(), kept)
}

fn dedupe_shapes(mut shapes: Vec<TriShape>) -> Vec<TriShape> {
    shapes.sort_by(|a, b| (a.side, &a.verts, &a.chart).cmp(&(b.side, &b.verts, &b.chart)));
    shapes.dedup_by(|a, b| a.side == b.side && a.verts == b.verts);
    shapes
}

/// Tests the four adjacency rules on a pair of catalogue shapes; `Some(gap)`
/// holds the unsigned side difference of a matching rule.
pub fn adjacency_test(host: &Graph, cat: &ShapeCatalogue, i: u32, j: u32) -> Option<u8> {
    if i == j {
        return None;
    }
    let (a, b) = (&cat.shapes[i as usize], &cat.shapes[j as usize]);
    let (small, large) = if a.side <= b.side { (a, b) } else { (b, a) };
    let gap = large.side - small.side;
    match gap {
        0 => type_zero(host, small, large).then_some(0),
        2 | 4 | 6 => containment_type(host, cat, small, large, gap as u8),
        _ => None,
    }
}

fn subset_of_closed_neighbourhood(host: &Graph, inner: &[VertexId], outer: &[VertexId]) -> bool {
    inner.iter().all(|&v| {
        outer.binary_search(&v).is_ok()
            || host.neighbors(v).iter().any(|u| outer.binary_search(u).is_ok())
    })
}

fn type_zero(host: &Graph, s1: &TriShape, s2: &TriShape) -> bool {
    subset_of_closed_neighbourhood(host, &s1.verts, &s2.verts)
        && subset_of_closed_neighbourhood(host, &s2.verts, &s1.verts)
}

fn edges_within(
    cat: &ShapeCatalogue,
    shape: &TriShape,
    allowed: &FxHashSet<(VertexId, VertexId)>,
) -> bool {
    shape
        .edge_pairs(cat.edge_positions_for(shape.side))
        .iter()
        .all(|e| allowed.contains(e))
}

fn containment_type(
    host: &Graph,
    cat: &ShapeCatalogue,
    small: &TriShape,
    large: &TriShape,
    gap: u8,
) -> Option<u8> {
    let region: Vec<VertexId> = match gap {
        2 => large.verts.clone(),
        4 => large.interior_hosts(),
        6 => {
            let eaten = host.closed_neighbourhood_of_set(&large.boundary_hosts());
            large
                .verts
                .iter()
                .copied()
                .filter(|v| eaten.binary_search(v).is_err())
                .collect()
        }
        _ => return None,
    };
    let vertex_ok = if gap == 6 {
        region == small.verts
    } else {
        small.verts.iter().all(|v| region.binary_search(v).is_ok())
    };
    if !vertex_ok {
        return None;
    }
    let large_edges: FxHashSet<(VertexId, VertexId)> = large
        .edge_pairs(cat.edge_positions_for(large.side))
        .into_iter()
        .collect();
    edges_within(cat, small, &large_edges).then_some(gap)
}

/// The geometric clique graph over a host at a given level.
#[derive(Debug, Clone)]
pub struct GeoCliqueGraph {
    pub level: u32,
    pub catalogue: ShapeCatalogue,
    /// Graph over shape indices.
    pub graph: Graph,
    /// Edges with their unsigned type (side gap), endpoints ascending.
    pub edge_types: Vec<(u32, u32, u8)>,
    /// Host predicate report; a level built over a host violating the
    /// locally-cyclic minimum-degree-six assumption is flagged, not refused.
    pub host_report: LocallyCyclicReport,
    /// Host distance to the nearest defect vertex (window rim), or
    /// `u32::MAX` when the host has none.
    pub host_rim_distance: Vec<u32>,
    shape_rim_distance: Vec<u32>,
}

impl GeoCliqueGraph {
    pub fn shape_rim_distance(&self, shape: u32) -> u32 {
        self.shape_rim_distance[shape as usize]
    }

    /// Shapes whose host distance to the rim is at least `margin`; on a
    /// rimless host every shape classifies.
    pub fn classifiable(&self, margin: u32) -> Vec<u32> {
        (0..self.catalogue.len() as u32)
            .filter(|&s| self.shape_rim_distance[s as usize] >= margin)
            .collect()
    }

    /// Per-type neighbour counts of a shape; types are signed side gaps.
    pub fn neighbour_type_profile(&self, shape: u32) -> BTreeMap<i32, usize> {
        let side = self.catalogue.side(shape) as i32;
        let mut out = BTreeMap::new();
        for &n in self.graph.neighbors(VertexId(shape)) {
            let t = self.catalogue.side(n.0) as i32 - side;
            *out.entry(t).or_insert(0) += 1;
        }
        out
    }
}

/// Builds `G_n`: vertices are the shapes of side `<= n` congruent to `n`
/// mod 2, edges are all pairs passing the adjacency rules. Candidate pairs
/// are generated locally from per-corner shape lists.
pub fn geo_clique_graph(host: &Graph, level: u32) -> GeoCliqueGraph {
    let catalogue = enumerate_trishapes(host, level, (level % 2) as u8);
    assemble_geo(host, level, catalogue)
}

/// Assembles the level graph from an existing catalogue by running the
/// adjacency rules.
pub fn assemble_geo(host: &Graph, level: u32, catalogue: ShapeCatalogue) -> GeoCliqueGraph {
    let n = catalogue.len() as u32;
    let edge_lists: Vec<Vec<(u32, u32, u8)>> = (0..n)
        .into_par_iter()
        .map(|i| candidate_edges(host, &catalogue, i, level))
        .collect();
    let edge_types: Vec<(u32, u32, u8)> = edge_lists.into_iter().flatten().collect();
    geo_from_parts(host, level, catalogue, edge_types)
}

/// Assembles a level graph from an explicit typed edge list (used by the
/// covering-quotient construction, whose edges come from a lattice window
/// rather than from adjacency tests on the host).
pub fn geo_from_parts(
    host: &Graph,
    level: u32,
    catalogue: ShapeCatalogue,
    mut edge_types: Vec<(u32, u32, u8)>,
) -> GeoCliqueGraph {
    edge_types.sort_unstable();
    edge_types.dedup();
    let edges: Vec<(u32, u32)> = edge_types.iter().map(|&(a, b, _)| (a, b)).collect();
    let graph = Graph::new(catalogue.len(), &edges).expect("shape ids are dense");
    let host_report = host.is_locally_cyclic();
    let rim = host.defect_vertices();
    let host_rim_distance: Vec<u32> = if rim.is_empty() {
        vec![u32::MAX; host.vertex_count()]
    } else {
        host.distances_from(&rim)
            .into_iter()
            .map(|d| d.unwrap_or(u32::MAX))
            .collect()
    };
    let shape_rim_distance = catalogue
        .shapes
        .iter()
        .map(|s| s.verts.iter().map(|v| host_rim_distance[v.index()]).min().unwrap())
        .collect();
    GeoCliqueGraph {
        level,
        catalogue,
        graph,
        edge_types,
        host_report,
        host_rim_distance,
        shape_rim_distance,
    }
}

fn intersect_ascending(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Edges incident to shape `i`, generated from corner-local candidate sets:
/// a same-side neighbour meets the closed neighbourhood of every corner, a
/// larger neighbour contains every corner.
fn candidate_edges(host: &Graph, cat: &ShapeCatalogue, i: u32, level: u32) -> Vec<(u32, u32, u8)> {
    let shape = &cat.shapes[i as usize];
    let corners = shape.corner_hosts();
    let mut out = Vec::new();

    // same side: ids j > i whose vertex set meets N[corner] for each corner
    let mut same: Option<Vec<u32>> = None;
    for &c in &corners {
        let mut reachable: Vec<u32> = Vec::new();
        for v in host.neighbourhood(c, true).unwrap() {
            reachable.extend_from_slice(cat.shapes_of_side_containing(shape.side, v));
        }
        reachable.sort_unstable();
        reachable.dedup();
        same = Some(match same {
            None => reachable,
            Some(prev) => intersect_ascending(&prev, &reachable),
        });
    }
    for j in same.unwrap_or_default() {
        if j > i && type_zero(host, shape, &cat.shapes[j as usize]) {
            out.push((i, j, 0));
        }
    }

    // larger sides: ids whose vertex set contains all three corners
    for gap in [2u8, 4, 6] {
        let big = shape.side + gap as u32;
        if big > level || !cat.has_side(big) {
            continue;
        }
        let mut candidates: Option<Vec<u32>> = None;
        for &c in &corners {
            let list = cat.shapes_of_side_containing(big, c).to_vec();
            candidates = Some(match candidates {
                None => list,
                Some(prev) => intersect_ascending(&prev, &list),
            });
        }
        for j in candidates.unwrap_or_default() {
            if containment_type(host, cat, shape, &cat.shapes[j as usize], gap).is_some() {
                out.push((i.min(j), i.max(j), gap));
            }
        }
    }
    out
}

/// The degree-26 census of a level graph.
#[derive(Debug, Clone)]
pub struct Deg26Census {
    pub margin: u32,
    pub deg26: Vec<u32>,
    pub not26: Vec<u32>,
    /// Shapes too close to the window rim to classify.
    pub excluded: Vec<u32>,
    /// Classified counts per side as (degree-26, other); sides two and four
    /// are reported like the rest so the small-side behaviour can be
    /// examined empirically.
    pub by_side: BTreeMap<u32, (usize, usize)>,
}

/// Partitions the classifiable shapes by whether their level-graph degree
/// equals 26.
pub fn deg26_census(gcg: &GeoCliqueGraph, margin: u32) -> Deg26Census {
    let mut census = Deg26Census {
        margin,
        deg26: Vec::new(),
        not26: Vec::new(),
        excluded: Vec::new(),
        by_side: BTreeMap::new(),
    };
    for s in 0..gcg.catalogue.len() as u32 {
        if gcg.shape_rim_distance(s) < margin {
            census.excluded.push(s);
            continue;
        }
        let side = gcg.catalogue.side(s);
        let entry = census.by_side.entry(side).or_insert((0, 0));
        if gcg.graph.degree(VertexId(s)) == 26 {
            census.deg26.push(s);
            entry.0 += 1;
        } else {
            census.not26.push(s);
            entry.1 += 1;
        }
    }
    census
}

#[derive(Debug, Clone)]
pub struct DistanceInvariant {
    /// Per probe: shape id and its level-graph distance to the classified
    /// not-26 set (`None` when unreachable).
    pub per_probe: Vec<(u32, Option<u32>)>,
    pub max: Option<u32>,
    /// Set when the not-26 set was empty while probes were given.
    pub no_targets: bool,
}

/// Distance from each probe to the classified not-26 set, measured in the
/// level graph. On windowed hosts this is a certificate for the probed
/// region rather than the full invariant of the infinite host.
pub fn invariant_d(gcg: &GeoCliqueGraph, census: &Deg26Census, probes: &[u32]) -> DistanceInvariant {
    if census.not26.is_empty() {
        return DistanceInvariant {
            per_probe: probes.iter().map(|&p| (p, None)).collect(),
            max: None,
            no_targets: !probes.is_empty(),
        };
    }
    let sources: Vec<VertexId> = census.not26.iter().map(|&s| VertexId(s)).collect();
    let dist = gcg.graph.distances_from(&sources);
    let per_probe: Vec<(u32, Option<u32>)> =
        probes.iter().map(|&p| (p, dist[p as usize])).collect();
    let max = per_probe.iter().filter_map(|&(_, d)| d).max();
    DistanceInvariant { per_probe, max, no_targets: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexgeo::{cone_lattice, hex_window, torus_graph, TorusSpec, WindowSpec};
    use crate::naive::brute_force_trishapes;

    fn window(r: u32) -> crate::hexgeo::HexWindow {
        hex_window(&WindowSpec { center: [0, 0, 0], radius: r })
    }

    #[test]
    fn k3_has_one_triangle_shape() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let cat = enumerate_trishapes(&g, 1, 1);
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.shapes[0].side, 1);
    }

    #[test]
    fn triangle_free_hosts_have_no_positive_shapes() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cat = enumerate_trishapes(&c5, 3, 1);
        assert!(cat.is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force_on_windows() {
        let w = window(4);
        for m in [0u32, 1, 2, 3, 4] {
            let cat = enumerate_trishapes(&w.graph, m, (m % 2) as u8);
            let fast: Vec<Vec<VertexId>> = cat
                .shapes
                .iter()
                .filter(|s| s.side == m)
                .map(|s| s.verts.clone())
                .collect();
            let brute = brute_force_trishapes(&w.graph, m);
            assert_eq!(fast, brute, "side {m} on a radius-4 window");
        }
    }

    #[test]
    fn enumeration_matches_brute_force_on_torus_and_cone() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        for m in [1u32, 2, 3] {
            let cat = enumerate_trishapes(&t.graph, m, (m % 2) as u8);
            let fast: Vec<Vec<VertexId>> = cat
                .shapes
                .iter()
                .filter(|s| s.side == m)
                .map(|s| s.verts.clone())
                .collect();
            assert_eq!(fast, brute_force_trishapes(&t.graph, m), "torus side {m}");
        }
        let cone = cone_lattice(7, 4).unwrap();
        for m in [2u32, 3] {
            let cat = enumerate_trishapes(&cone.graph, m, (m % 2) as u8);
            let fast: Vec<Vec<VertexId>> = cat
                .shapes
                .iter()
                .filter(|s| s.side == m)
                .map(|s| s.verts.clone())
                .collect();
            assert_eq!(fast, brute_force_trishapes(&cone.graph, m), "cone side {m}");
        }
    }

    #[test]
    fn torus_shape_counts() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let cat = enumerate_trishapes(&t.graph, 2, 0);
        let hist = cat.side_histogram();
        assert_eq!(hist[&0], 25);
        assert_eq!(hist[&2], 50); // one upward and one downward per vertex
    }

    #[test]
    fn level_zero_graph_is_the_host() {
        let t = torus_graph(&TorusSpec { basis: [[4, 0], [0, 4]] }).unwrap();
        let gcg = geo_clique_graph(&t.graph, 0);
        assert_eq!(gcg.graph.vertex_count(), t.graph.vertex_count());
        // side-0 shapes are enumerated in vertex order
        for (u, v) in t.graph.edges() {
            assert!(gcg.graph.has_edge(u, v));
        }
        assert_eq!(gcg.graph.edge_count(), t.graph.edge_count());
    }

    #[test]
    fn level_two_interior_profile() {
        let w = window(8);
        let gcg = geo_clique_graph(&w.graph, 2);
        let center = w.vertex_at(HexCoord(0, 0, 0)).unwrap();
        let shape = gcg.catalogue.find(0, &[center]).unwrap();
        let profile = gcg.neighbour_type_profile(shape);
        assert_eq!(profile.get(&0), Some(&6));
        assert_eq!(profile.get(&2), Some(&12));
        assert_eq!(profile.get(&4), None); // no side-4 shapes at level 2
    }

    #[test]
    fn level_six_deep_vertex_has_all_26() {
        let w = window(11);
        let gcg = geo_clique_graph(&w.graph, 6);
        let center = w.vertex_at(HexCoord(0, 0, 0)).unwrap();
        let shape = gcg.catalogue.find(0, &[center]).unwrap();
        let profile = gcg.neighbour_type_profile(shape);
        assert_eq!(profile.get(&0), Some(&6));
        assert_eq!(profile.get(&2), Some(&12));
        assert_eq!(profile.get(&4), Some(&6));
        assert_eq!(profile.get(&6), Some(&2));
        assert_eq!(gcg.graph.degree(VertexId(shape)), 26);
    }

    #[test]
    fn cone_apex_degree_is_three_times_its_host_degree() {
        let cone = cone_lattice(7, 6).unwrap();
        let gcg = geo_clique_graph(&cone.graph, 2);
        let apex_shape = gcg.catalogue.find(0, &[cone.apex]).unwrap();
        assert_eq!(gcg.graph.degree(VertexId(apex_shape)), 21);
        let profile = gcg.neighbour_type_profile(apex_shape);
        assert_eq!(profile.get(&0), Some(&7));
        assert_eq!(profile.get(&2), Some(&14));
    }

    #[test]
    fn edge_gaps_are_even_and_bounded() {
        let w = window(6);
        let gcg = geo_clique_graph(&w.graph, 4);
        for &(a, b, gap) in &gcg.edge_types {
            let (sa, sb) = (gcg.catalogue.side(a), gcg.catalogue.side(b));
            assert_eq!(sa.abs_diff(sb), gap as u32);
            assert!(matches!(gap, 0 | 2 | 4 | 6));
        }
    }

    #[test]
    fn adjacency_rules_match_type_catalogue() {
        // a +6 pair via erosion: central Δ_0 inside Δ_6 in a big window
        let w = window(10);
        let gcg = geo_clique_graph(&w.graph, 6);
        let center = w.vertex_at(HexCoord(0, 0, 0)).unwrap();
        let small = gcg.catalogue.find(0, &[center]).unwrap();
        let mut found_plus6 = false;
        for &(a, b, gap) in &gcg.edge_types {
            if gap == 6 && (a == small || b == small) {
                found_plus6 = true;
                let big = if a == small { b } else { a };
                assert_eq!(gcg.catalogue.side(big), 6);
                assert_eq!(adjacency_test(&w.graph, &gcg.catalogue, small, big), Some(6));
            }
        }
        assert!(found_plus6);
        // far-apart shapes are not adjacent
        let far = w.vertex_at(HexCoord(8, -8, 0)).unwrap();
        let far_shape = gcg.catalogue.find(0, &[far]).unwrap();
        assert_eq!(adjacency_test(&w.graph, &gcg.catalogue, small, far_shape), None);
    }

    #[test]
    fn twisted_adjacencies_exist_for_small_sides() {
        // beyond the six aligned same-side neighbours, an interior Δ_2 has
        // three inverted overlapping ones (nine in total); an interior Δ_4
        // additionally contains the inverted central Δ_2, giving seven
        // type -2 neighbours
        let w = window(12);
        let gcg = geo_clique_graph(&w.graph, 4);
        let deep: Vec<u32> = (0..gcg.catalogue.len() as u32)
            .filter(|&s| gcg.shape_rim_distance(s) >= 6)
            .collect();
        let mut checked2 = 0usize;
        let mut checked4 = 0usize;
        for &s in &deep {
            let profile = gcg.neighbour_type_profile(s);
            match gcg.catalogue.side(s) {
                2 => {
                    assert_eq!(profile.get(&0), Some(&9), "shape {s}");
                    checked2 += 1;
                }
                4 => {
                    assert_eq!(profile.get(&-2), Some(&7), "shape {s}");
                    checked4 += 1;
                }
                _ => {}
            }
        }
        assert!(checked2 > 0 && checked4 > 0);
    }

    #[test]
    fn odd_side_gaps_are_never_adjacent() {
        let w = window(6);
        let even = enumerate_trishapes(&w.graph, 2, 0);
        let odd = enumerate_trishapes(&w.graph, 1, 1);
        let mut shapes = even.shapes.clone();
        shapes.extend(odd.shapes.iter().cloned());
        let mixed = ShapeCatalogue::from_shapes(w.graph.vertex_count(), shapes);
        let mut tested = 0usize;
        for i in 0..mixed.len() as u32 {
            for j in 0..mixed.len() as u32 {
                let gap = mixed.side(i).abs_diff(mixed.side(j));
                if gap % 2 == 1 {
                    assert_eq!(adjacency_test(&w.graph, &mixed, i, j), None);
                    tested += 1;
                    if tested > 500 {
                        return;
                    }
                }
            }
        }
    }

    #[test]
    fn census_and_invariant_on_a_window() {
        let w = window(14);
        let gcg = geo_clique_graph(&w.graph, 6);
        let census = deg26_census(&gcg, 4);
        assert!(!census.deg26.is_empty());
        assert!(!census.not26.is_empty());
        assert!(!census.excluded.is_empty());
        let total = census.deg26.len() + census.not26.len() + census.excluded.len();
        assert_eq!(total, gcg.catalogue.len());

        // probes already in the not-26 set have distance zero
        let probe = census.not26[0];
        let inv = invariant_d(&gcg, &census, &[probe]);
        assert_eq!(inv.per_probe[0].1, Some(0));

        // a deep degree-26 vertex has positive distance
        let center = w.vertex_at(HexCoord(0, 0, 0)).unwrap();
        let shape = gcg.catalogue.find(0, &[center]).unwrap();
        assert!(census.deg26.contains(&shape));
        let inv = invariant_d(&gcg, &census, &[shape]);
        assert!(inv.per_probe[0].1.unwrap() >= 1);
    }

    #[test]
    fn empty_census_flags_missing_targets() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let gcg = geo_clique_graph(&t.graph, 0);
        // at level zero every degree is six, so nothing has degree 26
        let census = deg26_census(&gcg, 0);
        assert!(census.deg26.is_empty());
        let inv = invariant_d(&gcg, &census, &[0]);
        assert!(inv.per_probe[0].1.is_some()); // everything is a target
        let empty = Deg26Census {
            margin: 0,
            deg26: (0..gcg.catalogue.len() as u32).collect(),
            not26: Vec::new(),
            excluded: Vec::new(),
            by_side: BTreeMap::new(),
        };
        let inv = invariant_d(&gcg, &empty, &[0]);
        assert!(inv.no_targets);
        assert_eq!(inv.per_probe[0].1, None);
    }

    #[test]
    fn orientation_in_windows() {
        let w = window(5);
        let gcg = geo_clique_graph(&w.graph, 2);
        let coord_of = |v: VertexId| Some(w.coords[v.index()]);
        let mut up = 0usize;
        let mut down = 0usize;
        for shape in &gcg.catalogue.shapes {
            if shape.side == 2 {
                match shape.orientation_in(coord_of) {
                    Some(1) => up += 1,
                    Some(-1) => down += 1,
                    other => panic!("chart must be oriented, got {other:?}"),
                }
            }
        }
        assert!(up > 0 && down > 0);
        assert_eq!(up + down, gcg.catalogue.side_histogram()[&2]);
    }
}
