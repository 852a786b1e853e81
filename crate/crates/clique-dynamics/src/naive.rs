//! Slow reference implementations used as independent oracles by the test
//! suites. Nothing here shares code with the fast paths it checks.

use rustc_hash::FxHashSet;

use crate::graph::{Graph, VertexId};
use crate::hexgeo::{delta_coords, HexCoord, DIRECTIONS};

/// Maximal cliques by growing complete subgraphs vertex by vertex and
/// keeping the inclusion-maximal ones.
pub fn brute_force_cliques(graph: &Graph) -> Vec<Vec<VertexId>> {
    fn grow(graph: &Graph, current: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        let maximal = graph
            .vertices()
            .all(|v| current.contains(&v) || !current.iter().all(|&u| graph.has_edge(u, v)));
        if maximal && !current.is_empty() {
            out.push(current.clone());
        }
        let floor = current.last().map(|v| v.0 + 1).unwrap_or(0);
        for v in floor..graph.vertex_count() as u32 {
            let v = VertexId(v);
            if current.iter().all(|&u| graph.has_edge(u, v)) {
                current.push(v);
                grow(graph, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(graph, &mut Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn lex_coords(m: u32) -> Vec<HexCoord> {
    let mut coords = delta_coords(m);
    coords.sort_unstable();
    coords
}

/// One injective homomorphism from `Δ_m` into the host, restricted to
/// `allowed` vertices when given. Positions are filled in lexicographic
/// coordinate order; only template edges are enforced.
fn embed(
    host: &Graph,
    coords: &[HexCoord],
    allowed: Option<&[VertexId]>,
    collect_all: bool,
) -> Vec<Vec<VertexId>> {
    let find = |c: HexCoord| coords.binary_search(&c).ok();
    let mut back_edges: Vec<Vec<usize>> = vec![Vec::new(); coords.len()];
    for (i, &c) in coords.iter().enumerate() {
        for d in DIRECTIONS {
            if let Some(j) = find(c + d) {
                if j < i {
                    back_edges[i].push(j);
                }
            }
        }
    }
    struct State<'a> {
        host: &'a Graph,
        back_edges: &'a [Vec<usize>],
        allowed: Option<&'a [VertexId]>,
        collect_all: bool,
        assignment: Vec<VertexId>,
        used: FxHashSet<VertexId>,
        out: Vec<Vec<VertexId>>,
    }
    fn rec(s: &mut State<'_>) {
        if !s.collect_all && !s.out.is_empty() {
            return;
        }
        let pos = s.assignment.len();
        if pos == s.back_edges.len() {
            s.out.push(s.assignment.clone());
            return;
        }
        let candidates: Vec<VertexId> = match s.back_edges[pos].first() {
            Some(&anchor) => s.host.neighbors(s.assignment[anchor]).to_vec(),
            None => match s.allowed {
                Some(set) => set.to_vec(),
                None => s.host.vertices().collect(),
            },
        };
        for v in candidates {
            if s.used.contains(&v) {
                continue;
            }
            if let Some(set) = s.allowed {
                if set.binary_search(&v).is_err() {
                    continue;
                }
            }
            if s.back_edges[pos].iter().all(|&j| s.host.has_edge(s.assignment[j], v)) {
                s.assignment.push(v);
                s.used.insert(v);
                rec(s);
                s.assignment.pop();
                s.used.remove(&v);
            }
        }
    }
    let mut state = State {
        host,
        back_edges: &back_edges,
        allowed,
        collect_all,
        assignment: Vec::new(),
        used: FxHashSet::default(),
        out: Vec::new(),
    };
    rec(&mut state);
    state.out
}

/// All vertex sets of `Δ_m`-shaped subgraphs of the host, by plain
/// backtracking.
pub fn brute_force_trishapes(host: &Graph, m: u32) -> Vec<Vec<VertexId>> {
    let coords = lex_coords(m);
    let mut out: Vec<Vec<VertexId>> = embed(host, &coords, None, true)
        .into_iter()
        .map(|mut verts| {
            verts.sort_unstable();
            verts
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// A triangular-shaped subgraph reconstructed purely from its vertex set:
/// the template edge structure is re-found by backtracking, and the boundary
/// is read off the shape itself (vertices of shape-degree below six) rather
/// than from chart coordinates.
pub struct NaiveShape {
    pub side: u32,
    pub verts: Vec<VertexId>,
    pub edges: FxHashSet<(VertexId, VertexId)>,
    pub boundary: Vec<VertexId>,
}

pub fn naive_shape(host: &Graph, side: u32, verts: &[VertexId]) -> Option<NaiveShape> {
    let mut sorted = verts.to_vec();
    sorted.sort_unstable();
    let coords = lex_coords(side);
    if coords.len() != sorted.len() {
        return None;
    }
    let embedding = embed(host, &coords, Some(&sorted), false).into_iter().next()?;
    let find = |c: HexCoord| coords.binary_search(&c).ok();
    let mut edges: FxHashSet<(VertexId, VertexId)> = FxHashSet::default();
    for (i, &ci) in coords.iter().enumerate() {
        for d in DIRECTIONS {
            if let Some(j) = find(ci + d) {
                let (a, b) = (embedding[i], embedding[j]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    let degree_in_shape =
        |v: VertexId| edges.iter().filter(|&&(a, b)| a == v || b == v).count();
    let boundary: Vec<VertexId> = sorted
        .iter()
        .copied()
        .filter(|&v| degree_in_shape(v) < 6)
        .collect();
    Some(NaiveShape { side, verts: sorted, edges, boundary })
}

/// Direct evaluation of the four adjacency rules from shape data alone.
pub fn naive_adjacency_type(host: &Graph, s1: &NaiveShape, s2: &NaiveShape) -> Option<u8> {
    let (small, large) = if s1.side <= s2.side { (s1, s2) } else { (s2, s1) };
    let gap = large.side - small.side;
    let in_set = |set: &[VertexId], v: VertexId| set.binary_search(&v).is_ok();
    let sub_edges =
        |a: &NaiveShape, b: &NaiveShape| a.edges.iter().all(|e| b.edges.contains(e));
    match gap {
        0 => {
            if small.verts == large.verts {
                return None;
            }
            let n2 = host.closed_neighbourhood_of_set(&large.verts);
            let n1 = host.closed_neighbourhood_of_set(&small.verts);
            let fwd = small.verts.iter().all(|&v| in_set(&n2, v));
            let bwd = large.verts.iter().all(|&v| in_set(&n1, v));
            (fwd && bwd).then_some(0)
        }
        2 => {
            let contained = small.verts.iter().all(|&v| in_set(&large.verts, v));
            (contained && sub_edges(small, large)).then_some(2)
        }
        4 => {
            let contained = small
                .verts
                .iter()
                .all(|&v| in_set(&large.verts, v) && !large.boundary.contains(&v));
            (contained && sub_edges(small, large)).then_some(4)
        }
        6 => {
            let eaten = host.closed_neighbourhood_of_set(&large.boundary);
            let core: Vec<VertexId> = large
                .verts
                .iter()
                .copied()
                .filter(|&v| !in_set(&eaten, v))
                .collect();
            (core == small.verts && sub_edges(small, large)).then_some(6)
        }
        _ => None,
    }
}
