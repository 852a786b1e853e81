//! Finite simple graphs with dense integer vertex ids and sorted adjacency.
//!
//! Every other module builds on this one. Graphs are immutable after
//! construction, adjacency sets are kept sorted ascending so that all
//! derived enumerations are deterministic and diffable.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense per-graph vertex identifier.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) references a vertex out of range (vertex count {2})")]
    VertexOutOfRange(u32, u32, usize),
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(u32),
    #[error("vertex {0} out of range (vertex count {1})")]
    InvalidVertex(u32, usize),
    #[error("sequence is not a walk: {0} and {1} are not adjacent")]
    NotAWalk(u32, u32),
    #[error("walk must contain at least one vertex")]
    EmptyWalk,
    #[error("graph is not locally cyclic (first failing vertex: {0:?})")]
    NotLocallyCyclic(Option<VertexId>),
}

/// A finite simple graph. Adjacency is symmetric, loop-free and sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    labels: Option<Vec<serde_json::Value>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.vertex_count(), self.edge_count())
    }
}

impl Graph {
    /// Builds a graph from a vertex count and an edge list. Duplicate edges
    /// collapse; out-of-range ids and self-loops are rejected.
    pub fn new(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(GraphError::VertexOutOfRange(u, v, vertex_count));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize].push(VertexId(v));
            adj[v as usize].push(VertexId(u));
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<serde_json::Value>) -> Graph {
        assert_eq!(labels.len(), self.vertex_count());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[serde_json::Value]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|list| list.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adj.len() as u32).map(VertexId)
    }

    /// Edges as ordered pairs (u < v).
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u.index()]
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v.0, self.adj.len()))
        }
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u.index()].binary_search(&v).is_ok()
    }

    /// Open or closed neighbourhood of a single vertex, sorted.
    pub fn neighbourhood(&self, v: VertexId, closed: bool) -> Result<Vec<VertexId>, GraphError> {
        self.check_vertex(v)?;
        let mut out = self.adj[v.index()].clone();
        if closed {
            match out.binary_search(&v) {
                Ok(_) => {}
                Err(pos) => out.insert(pos, v),
            }
        }
        Ok(out)
    }

    /// Closed neighbourhood of a vertex set, sorted.
    pub fn closed_neighbourhood_of_set(&self, set: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = set.to_vec();
        for &v in set {
            out.extend_from_slice(&self.adj[v.index()]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// BFS distance from `source` to the nearest vertex of `targets`.
    /// `None` means unreachable (or an empty target set).
    pub fn distance(&self, source: VertexId, targets: &[VertexId]) -> Result<Option<u32>, GraphError> {
        self.check_vertex(source)?;
        for &t in targets {
            self.check_vertex(t)?;
        }
        if targets.is_empty() {
            return Ok(None);
        }
        let mut is_target = vec![false; self.vertex_count()];
        for &t in targets {
            is_target[t.index()] = true;
        }
        if is_target[source.index()] {
            return Ok(Some(0));
        }
        let mut dist = vec![u32::MAX; self.vertex_count()];
        dist[source.index()] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u.index()] + 1;
            for &w in &self.adj[u.index()] {
                if dist[w.index()] == u32::MAX {
                    if is_target[w.index()] {
                        return Ok(Some(d));
                    }
                    dist[w.index()] = d;
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    pub fn distance_between(&self, u: VertexId, v: VertexId) -> Result<Option<u32>, GraphError> {
        self.distance(u, &[v])
    }

    /// Multi-source BFS: distance from the nearest source, per vertex.
    pub fn distances_from(&self, sources: &[VertexId]) -> Vec<Option<u32>> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s.index()] == u32::MAX {
                dist[s.index()] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u.index()] + 1;
            for &w in &self.adj[u.index()] {
                if dist[w.index()] == u32::MAX {
                    dist[w.index()] = d;
                    queue.push_back(w);
                }
            }
        }
        dist.into_iter()
            .map(|d| if d == u32::MAX { None } else { Some(d) })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return false;
        }
        self.distances_from(&[VertexId(0)]).iter().all(|d| d.is_some())
    }

    /// Induced subgraph on `verts` (need not be sorted; output vertex `i`
    /// corresponds to `verts[i]` after sorting and deduplication).
    pub fn induced(&self, verts: &[VertexId]) -> (Graph, Vec<VertexId>) {
        let mut sel: Vec<VertexId> = verts.to_vec();
        sel.sort_unstable();
        sel.dedup();
        let mut pos = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in sel.iter().enumerate() {
            pos[v.index()] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in &sel {
            for &w in &self.adj[v.index()] {
                if v < w && pos[w.index()] != u32::MAX {
                    edges.push((pos[v.index()], pos[w.index()]));
                }
            }
        }
        let graph = Graph::new(sel.len(), &edges).expect("induced edges are in range");
        (graph, sel)
    }

    /// All triangles as sorted id triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[VertexId; 3]> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for &v in &self.adj[u.index()] {
                if v <= u {
                    continue;
                }
                // common neighbours w > v keep each triple unique
                for &w in &self.adj[v.index()] {
                    if w > v && self.has_edge(u, w) {
                        out.push([u, v, w]);
                    }
                }
            }
        }
        out
    }

    /// Number of triangles containing the edge (u, v).
    pub fn triangles_on_edge(&self, u: VertexId, v: VertexId) -> usize {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a.index()]
            .iter()
            .filter(|&&w| w != b && self.has_edge(w, b))
            .count()
    }

    /// Closed-surface condition: every edge lies in exactly two triangles.
    pub fn every_edge_in_two_triangles(&self) -> bool {
        self.edges().all(|(u, v)| self.triangles_on_edge(u, v) == 2)
    }

    /// Checks whether each open neighbourhood induces a single cycle of
    /// length at least three.
    pub fn is_locally_cyclic(&self) -> LocallyCyclicReport {
        let mut min_degree = usize::MAX;
        let mut witness = None;
        for v in self.vertices() {
            let deg = self.degree(v);
            min_degree = min_degree.min(deg);
            if witness.is_some() {
                continue;
            }
            if !self.neighbourhood_is_cycle(v) {
                witness = Some(v);
            }
        }
        if self.vertex_count() == 0 {
            return LocallyCyclicReport { ok: false, min_degree: 0, witness: None };
        }
        LocallyCyclicReport { ok: witness.is_none(), min_degree, witness }
    }

    /// True when the open neighbourhood of `v` induces one cycle.
    pub fn neighbourhood_is_cycle(&self, v: VertexId) -> bool {
        let nbrs = &self.adj[v.index()];
        let deg = nbrs.len();
        if deg < 3 {
            return false;
        }
        // 2-regular and connected within the neighbourhood
        let mut within: Vec<Vec<usize>> = vec![Vec::new(); deg];
        for (i, &a) in nbrs.iter().enumerate() {
            for (j, &b) in nbrs.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    within[i].push(j);
                    within[j].push(i);
                }
            }
        }
        if within.iter().any(|list| list.len() != 2) {
            return false;
        }
        let mut seen = vec![false; deg];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &within[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == deg
    }

    /// Vertices whose open neighbourhood does not induce a cycle. Empty for
    /// a triangulated surface without boundary; on a lattice window this is
    /// the rim.
    pub fn defect_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| !self.neighbourhood_is_cycle(v)).collect()
    }

    /// `|V| - |E| + |T|` for a locally cyclic graph.
    pub fn euler_characteristic(&self) -> Result<i64, GraphError> {
        let report = self.is_locally_cyclic();
        if !report.ok {
            return Err(GraphError::NotLocallyCyclic(report.witness));
        }
        Ok(self.vertex_count() as i64 - self.edge_count() as i64 + self.triangles().len() as i64)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertex_count(),
            edges: self.edges().map(|(u, v)| (u.0, v.0)).collect(),
            labels: self.labels.as_ref().map(|labels| {
                labels.iter().enumerate().map(|(i, l)| (i as u32, l.clone())).collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocallyCyclicReport {
    pub ok: bool,
    pub min_degree: usize,
    pub witness: Option<VertexId>,
}

/// Wire format: `{"vertices": N, "edges": [[u,v],...], "labels": {...}}`.
/// Edge order is irrelevant; the loader normalises.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<std::collections::BTreeMap<u32, serde_json::Value>>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<Graph, GraphError> {
        let graph = Graph::new(self.vertices, &self.edges)?;
        match self.labels {
            None => Ok(graph),
            Some(map) => {
                let mut labels = vec![serde_json::Value::Null; graph.vertex_count()];
                for (k, v) in map {
                    if (k as usize) < labels.len() {
                        labels[k as usize] = v;
                    } else {
                        return Err(GraphError::InvalidVertex(k, labels.len()));
                    }
                }
                Ok(graph.with_labels(labels))
            }
        }
    }
}

/// A walk: a non-empty vertex sequence with consecutive entries adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
}

#[allow(clippy::len_without_is_empty)] // a walk is never empty; length zero is the trivial walk
impl Walk {
    pub fn new(graph: &Graph, vertices: Vec<VertexId>) -> Result<Walk, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyWalk);
        }
        for &v in &vertices {
            graph.check_vertex(v)?;
        }
        for pair in vertices.windows(2) {
            if !graph.has_edge(pair[0], pair[1]) {
                return Err(GraphError::NotAWalk(pair[0].0, pair[1].0));
            }
        }
        Ok(Walk { vertices })
    }

    pub fn trivial(v: VertexId) -> Walk {
        Walk { vertices: vec![v] }
    }

    /// Number of steps (one less than the vertex count).
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }
}

/// The octahedron: all pairs on six vertices except the antipodes
/// (0,3), (1,4), (2,5). Used throughout the tests.
pub fn octahedron() -> Graph {
    let mut edges = Vec::new();
    for u in 0..6u32 {
        for v in (u + 1)..6 {
            if v != u + 3 {
                edges.push((u, v));
            }
        }
    }
    Graph::new(6, &edges).unwrap()
}

/// The icosahedron: two apexes, two pentagonal rings.
pub fn icosahedron() -> Graph {
    let mut edges = Vec::new();
    let a = |i: u32| 1 + (i % 5);
    let b = |i: u32| 6 + (i % 5);
    for i in 0..5u32 {
        edges.push((0, a(i)));
        edges.push((11, b(i)));
        edges.push((a(i), a(i + 1)));
        edges.push((b(i), b(i + 1)));
        edges.push((a(i), b(i)));
        edges.push((a(i + 1), b(i)));
    }
    Graph::new(12, &edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn build_triangle() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(VertexId(0)), &[VertexId(1), VertexId(2)]);
    }

    #[test]
    fn build_single_vertex() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::new(2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange(0, 2, 2))
        ));
        assert!(matches!(Graph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1))));
    }

    #[test]
    fn octahedron_counts() {
        let g = octahedron();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!(g.vertices().all(|v| g.degree(v) == 4));
        assert_eq!(g.triangles().len(), 8);
    }

    #[test]
    fn neighbourhoods() {
        let g = octahedron();
        assert_eq!(g.neighbourhood(VertexId(0), false).unwrap().len(), 4);
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            k3.neighbourhood(VertexId(0), true).unwrap(),
            vec![VertexId(0), VertexId(1), VertexId(2)]
        );
        let isolated = Graph::new(1, &[]).unwrap();
        assert!(isolated.neighbourhood(VertexId(0), false).unwrap().is_empty());
        assert!(isolated.neighbourhood(VertexId(7), false).is_err());
    }

    #[test]
    fn distances() {
        let g = path(3);
        assert_eq!(g.distance(VertexId(0), &[VertexId(2)]).unwrap(), Some(2));
        assert_eq!(g.distance(VertexId(1), &[VertexId(1)]).unwrap(), Some(0));
        assert_eq!(g.distance(VertexId(0), &[]).unwrap(), None);
        let two = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.distance(VertexId(0), &[VertexId(3)]).unwrap(), None);
    }

    #[test]
    fn distance_triangle_inequality() {
        let g = octahedron();
        for u in g.vertices() {
            for v in g.vertices() {
                for w in g.vertices() {
                    let duv = g.distance_between(u, v).unwrap().unwrap();
                    let dvw = g.distance_between(v, w).unwrap().unwrap();
                    let duw = g.distance_between(u, w).unwrap().unwrap();
                    assert!(duw <= duv + dvw);
                }
            }
        }
    }

    #[test]
    fn locally_cyclic_cases() {
        let oct = octahedron();
        let report = oct.is_locally_cyclic();
        assert!(report.ok);
        assert_eq!(report.min_degree, 4);

        // K4 is locally cyclic: every neighbourhood induces a 3-cycle.
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let report = k4.is_locally_cyclic();
        assert!(report.ok);
        assert_eq!(report.min_degree, 3);

        let p = path(4);
        assert!(!p.is_locally_cyclic().ok);
        assert_eq!(p.is_locally_cyclic().witness, Some(VertexId(0)));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(octahedron().euler_characteristic().unwrap(), 2);
        let ico = icosahedron();
        assert_eq!(ico.vertex_count(), 12);
        assert_eq!(ico.edge_count(), 30);
        assert!(ico.is_locally_cyclic().ok);
        assert_eq!(ico.euler_characteristic().unwrap(), 2);
        assert!(path(3).euler_characteristic().is_err());
    }

    #[test]
    fn surface_condition() {
        assert!(octahedron().every_edge_in_two_triangles());
        assert!(icosahedron().every_edge_in_two_triangles());
        let oct = octahedron();
        let incidences: usize = oct
            .edges()
            .map(|(u, v)| oct.triangles_on_edge(u, v))
            .sum();
        assert_eq!(incidences, 3 * oct.triangles().len());
    }

    #[test]
    fn adjacency_symmetry() {
        let g = icosahedron();
        for u in g.vertices() {
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = octahedron();
        let json = serde_json::to_string(&g.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&json).unwrap();
        let g2 = back.into_graph().unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn walks() {
        let g = path(3);
        assert!(Walk::new(&g, vec![VertexId(0), VertexId(1), VertexId(2)]).is_ok());
        assert!(Walk::new(&g, vec![VertexId(0), VertexId(2)]).is_err());
        assert!(Walk::new(&g, vec![]).is_err());
        let w = Walk::trivial(VertexId(1));
        assert!(w.is_closed() && w.is_trivial());
    }

    #[test]
    fn induced_subgraph() {
        let g = octahedron();
        let (h, sel) = g.induced(&[VertexId(0), VertexId(1), VertexId(2)]);
        assert_eq!(sel.len(), 3);
        assert_eq!(h.edge_count(), 3); // a face of the octahedron
    }
}
