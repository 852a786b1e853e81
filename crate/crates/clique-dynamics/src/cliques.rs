//! Maximal clique enumeration and the clique graph operator `k`.
//!
//! Enumeration is pivoting branch-and-bound over sorted candidate sets with
//! a deterministic pivot rule, so two runs produce identical orderings.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::covers::{CoverError, GroupAction};
use crate::graph::{Graph, VertexId};

/// Iterated clique graphs explode; the default budget turns blowup into a
/// measured signal instead of an allocation failure.
pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum CliqueError {
    #[error("image of clique {0} under generator {1} is not a maximal clique; input is not an automorphism or not a covering map")]
    ImageNotAClique(usize, usize),
    #[error(transparent)]
    Action(#[from] CoverError),
}

fn intersect_sorted(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
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

fn bron_kerbosch(
    graph: &Graph,
    r: &mut Vec<VertexId>,
    p: Vec<VertexId>,
    mut x: Vec<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
    limit: usize,
) -> bool {
    if p.is_empty() {
        if x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            if out.len() > limit {
                return false;
            }
        }
        return true;
    }
    // pivot: lowest-id vertex of maximum candidate degree in P ∪ X
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by(|&a, &b| {
            let da = intersect_sorted(graph.neighbors(a), &p).len();
            let db = intersect_sorted(graph.neighbors(b), &p).len();
            da.cmp(&db).then(b.cmp(&a))
        })
        .unwrap();
    let mut candidates: Vec<VertexId> = p
        .iter()
        .copied()
        .filter(|&v| !graph.has_edge(pivot, v))
        .collect();
    if candidates.is_empty() {
        // the pivot itself is always a candidate when it lies in P
        candidates = vec![pivot];
    }
    let mut p = p;
    for v in candidates {
        if !p.contains(&v) {
            continue;
        }
        let nbrs = graph.neighbors(v);
        r.push(v);
        let ok = bron_kerbosch(
            graph,
            r,
            intersect_sorted(&p, nbrs),
            intersect_sorted(&x, nbrs),
            out,
            limit,
        );
        r.pop();
        if !ok {
            return false;
        }
        p.retain(|&u| u != v);
        match x.binary_search(&v) {
            Ok(_) => {}
            Err(pos) => x.insert(pos, v),
        }
    }
    true
}

/// All maximal cliques, each sorted ascending, the list sorted
/// lexicographically.
pub fn max_cliques(graph: &Graph) -> Vec<Vec<VertexId>> {
    max_cliques_bounded(graph, usize::MAX).unwrap()
}

/// As [`max_cliques`], aborting with `None` once more than `limit` cliques
/// have been found.
pub fn max_cliques_bounded(graph: &Graph, limit: usize) -> Option<Vec<Vec<VertexId>>> {
    let mut out = Vec::new();
    let p: Vec<VertexId> = graph.vertices().collect();
    let finished = bron_kerbosch(graph, &mut Vec::new(), p, Vec::new(), &mut out, limit);
    if !finished {
        return None;
    }
    out.sort_unstable();
    Some(out)
}

/// The clique graph `kG` together with the membership of each clique-vertex
/// back in the host.
#[derive(Debug, Clone)]
pub struct CliqueGraph {
    pub graph: Graph,
    /// Sorted host vertex set of each clique, in clique-vertex order.
    pub members: Vec<Vec<VertexId>>,
    host_vertices: usize,
    index: FxHashMap<Vec<VertexId>, VertexId>,
}

impl CliqueGraph {
    pub fn host_vertex_count(&self) -> usize {
        self.host_vertices
    }

    /// Clique-vertex holding exactly this sorted host vertex set.
    pub fn find(&self, members: &[VertexId]) -> Option<VertexId> {
        self.index.get(members).copied()
    }
}

fn clique_graph_from(cliques: Vec<Vec<VertexId>>, host: &Graph) -> CliqueGraph {
    let mut containing: Vec<Vec<u32>> = vec![Vec::new(); host.vertex_count()];
    for (i, clique) in cliques.iter().enumerate() {
        for &v in clique {
            containing[v.index()].push(i as u32);
        }
    }
    let mut edges = Vec::new();
    for list in &containing {
        for (a, &i) in list.iter().enumerate() {
            for &j in list.iter().skip(a + 1) {
                edges.push((i.min(j), i.max(j)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::new(cliques.len(), &edges).expect("clique ids are dense");
    let index = cliques
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), VertexId(i as u32)))
        .collect();
    CliqueGraph { graph, members: cliques, host_vertices: host.vertex_count(), index }
}

/// The clique graph: vertices are the maximal cliques in enumeration order,
/// adjacent when they intersect.
pub fn clique_graph(graph: &Graph) -> CliqueGraph {
    clique_graph_from(max_cliques(graph), graph)
}

#[derive(Debug)]
pub struct Iteration {
    /// `[kG, k²G, ..]`, possibly truncated by the budget.
    pub levels: Vec<CliqueGraph>,
    pub budget_hit: bool,
}

/// Iterates the clique operator `n` times. Exceeding the vertex budget
/// yields a flagged partial result, not a failure.
pub fn iterate_clique_graph(graph: &Graph, n: u32, vertex_budget: usize) -> Iteration {
    let mut levels: Vec<CliqueGraph> = Vec::new();
    let mut current = graph.clone();
    for _ in 0..n {
        match max_cliques_bounded(&current, vertex_budget) {
            None => return Iteration { levels, budget_hit: true },
            Some(cliques) => {
                let kg = clique_graph_from(cliques, &current);
                current = kg.graph.clone();
                levels.push(kg);
            }
        }
    }
    Iteration { levels, budget_hit: false }
}

/// Pushes an automorphism action on the host forward to the clique graph:
/// `γQ = { γv | v ∈ Q }`.
pub fn induced_clique_action(action: &GroupAction, kg: &CliqueGraph) -> Result<GroupAction, CliqueError> {
    let mut generators = Vec::with_capacity(action.generators.len());
    for (gi, perm) in action.generators.iter().enumerate() {
        let mut images = Vec::with_capacity(kg.members.len());
        for (qi, clique) in kg.members.iter().enumerate() {
            let mut image: Vec<VertexId> = clique.iter().map(|&v| perm[v.index()]).collect();
            image.sort_unstable();
            let target = kg.find(&image).ok_or(CliqueError::ImageNotAClique(qi, gi))?;
            images.push(target);
        }
        generators.push(images);
    }
    Ok(GroupAction::new(&kg.graph, generators)?)
}

/// Pushes a covering map forward along the clique operator: each cover
/// clique maps to its elementwise image, which must be a base clique.
pub fn map_pk(
    host_map: &[VertexId],
    kg_cover: &CliqueGraph,
    kg_base: &CliqueGraph,
) -> Result<Vec<VertexId>, CliqueError> {
    let mut out = Vec::with_capacity(kg_cover.members.len());
    for (qi, clique) in kg_cover.members.iter().enumerate() {
        let mut image: Vec<VertexId> = clique.iter().map(|&v| host_map[v.index()]).collect();
        image.sort_unstable();
        image.dedup();
        let target = kg_base.find(&image).ok_or(CliqueError::ImageNotAClique(qi, 0))?;
        out.push(target);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::CoveringMap;
    use crate::graph::octahedron;
    use crate::hexgeo::{torus_graph, torus_to_torus_map, TorusSpec};
    use crate::naive::brute_force_cliques;

    fn cycle(n: u32) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n as usize, &edges).unwrap()
    }

    #[test]
    fn k3_has_one_clique() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_cliques(&g), vec![vec![VertexId(0), VertexId(1), VertexId(2)]]);
        assert_eq!(clique_graph(&g).graph.vertex_count(), 1);
    }

    #[test]
    fn five_cycle_cliques_are_edges() {
        let g = cycle(5);
        let cliques = max_cliques(&g);
        assert_eq!(cliques.len(), 5);
        assert!(cliques.iter().all(|c| c.len() == 2));
        // kC5 is again a connected 2-regular graph on five vertices
        let kg = clique_graph(&g);
        assert_eq!(kg.graph.vertex_count(), 5);
        assert!(kg.graph.vertices().all(|v| kg.graph.degree(v) == 2));
        assert!(kg.graph.is_connected());
    }

    #[test]
    fn octahedron_cliques_match_brute_force() {
        let g = octahedron();
        let cliques = max_cliques(&g);
        assert_eq!(cliques.len(), 8);
        assert!(cliques.iter().all(|c| c.len() == 3));
        assert_eq!(cliques, brute_force_cliques(&g));
        // each face is non-adjacent only to its antipodal face
        let kg = clique_graph(&g);
        for v in kg.graph.vertices() {
            assert_eq!(kg.graph.degree(v), 6);
        }
    }

    #[test]
    fn maximality_is_exhaustive() {
        let g = octahedron();
        for clique in max_cliques(&g) {
            for v in g.vertices() {
                if !clique.contains(&v) {
                    assert!(!clique.iter().all(|&u| g.has_edge(u, v)));
                }
            }
        }
    }

    #[test]
    fn determinism() {
        let g = crate::graph::icosahedron();
        assert_eq!(max_cliques(&g), max_cliques(&g));
    }

    #[test]
    fn connected_hosts_have_connected_clique_graphs() {
        for g in [octahedron(), crate::graph::icosahedron(), cycle(7)] {
            assert!(clique_graph(&g).graph.is_connected());
        }
    }

    #[test]
    fn iteration_and_budget() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let it = iterate_clique_graph(&k3, 2, DEFAULT_VERTEX_BUDGET);
        assert!(!it.budget_hit);
        assert_eq!(it.levels.len(), 2);
        assert_eq!(it.levels[0].graph.vertex_count(), 1);
        assert_eq!(it.levels[1].graph.vertex_count(), 1);

        let it = iterate_clique_graph(&k3, 0, DEFAULT_VERTEX_BUDGET);
        assert!(it.levels.is_empty());

        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let it = iterate_clique_graph(&t.graph, 1, DEFAULT_VERTEX_BUDGET);
        assert_eq!(it.levels[0].graph.vertex_count(), 50);

        let it = iterate_clique_graph(&t.graph, 2, 10);
        assert!(it.budget_hit);
        assert!(it.levels.is_empty());
    }

    #[test]
    fn induced_actions() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let kg = clique_graph(&t.graph);
        let action = t.translation_action();
        let induced = induced_clique_action(&action, &kg).unwrap();
        // a translation moves every triangle
        for perm in &induced.generators {
            assert!(perm.iter().enumerate().all(|(i, &v)| v.0 != i as u32));
        }

        // identity action induces the identity
        let id = GroupAction::new(&t.graph, vec![t.graph.vertices().collect()]).unwrap();
        let induced = induced_clique_action(&id, &kg).unwrap();
        assert!(induced.generators[0].iter().enumerate().all(|(i, &v)| v.0 == i as u32));
    }

    #[test]
    fn induced_action_respects_composition() {
        let g = octahedron();
        let kg = clique_graph(&g);
        let gamma: Vec<VertexId> =
            [1, 2, 0, 4, 5, 3].iter().map(|&i| VertexId(i)).collect();
        let delta: Vec<VertexId> =
            [3, 1, 2, 0, 4, 5].iter().map(|&i| VertexId(i)).collect();
        let composed: Vec<VertexId> = (0..6).map(|v| gamma[delta[v].index()]).collect();
        let action =
            GroupAction::new(&g, vec![gamma.clone(), delta.clone(), composed]).unwrap();
        let induced = induced_clique_action(&action, &kg).unwrap();
        let (ig, id, ic) = (&induced.generators[0], &induced.generators[1], &induced.generators[2]);
        for q in 0..kg.members.len() {
            assert_eq!(ic[q], ig[id[q].index()]);
        }
    }

    #[test]
    fn pushing_covers_through_the_operator() {
        let base = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let cover = torus_graph(&TorusSpec { basis: [[10, 0], [0, 10]] }).unwrap();
        let host_map = torus_to_torus_map(&cover, &base).unwrap();
        let kg_cover = clique_graph(&cover.graph);
        let kg_base = clique_graph(&base.graph);
        let k_map = map_pk(&host_map, &kg_cover, &kg_base).unwrap();
        let p = CoveringMap::new(&kg_cover.graph, &kg_base.graph, k_map.clone()).unwrap();
        let report = p.validate(None);
        assert!(report.ok, "{:?}", report.failure);

        // identity cover maps to the identity
        let id: Vec<VertexId> = base.graph.vertices().collect();
        let same = map_pk(&id, &kg_base, &kg_base).unwrap();
        assert!(same.iter().enumerate().all(|(i, &v)| v.0 == i as u32));

        // composed covers push forward compositionally
        let top = torus_graph(&TorusSpec { basis: [[20, 0], [0, 20]] }).unwrap();
        let q_map = torus_to_torus_map(&top, &cover).unwrap();
        let kg_top = clique_graph(&top.graph);
        let qk = map_pk(&q_map, &kg_top, &kg_cover).unwrap();
        let composed_host: Vec<VertexId> =
            q_map.iter().map(|&v| host_map[v.index()]).collect();
        let direct = map_pk(&composed_host, &kg_top, &kg_base).unwrap();
        let via: Vec<VertexId> = qk.iter().map(|&v| k_map[v.index()]).collect();
        assert_eq!(direct, via);
    }
}
