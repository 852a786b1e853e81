//! Walk homotopy by elementary moves, triangular covering maps with unique
//! lifting, bounded development of universal covers, and quotients of graphs
//! by automorphism actions.

use std::collections::{BinaryHeap, VecDeque};

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::cliques::CliqueGraph;
use crate::graph::{Graph, GraphError, VertexId, Walk};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("move position {0} out of range for walk of length {1}")]
    PositionOutOfRange(usize, usize),
    #[error("move requires an inserted vertex")]
    MissingInsertVertex,
    #[error("triangle insertion at {0}: inserted vertex does not complete a triangle")]
    NotATriangleInsertion(usize),
    #[error("triangle removal at {0}: the three consecutive vertices are not pairwise adjacent")]
    NotATriangleRemoval(usize),
    #[error("dead end insertion at {0}: inserted vertex is not adjacent")]
    NotADeadEndInsertion(usize),
    #[error("dead end removal at {0}: neighbours of the removed vertex differ")]
    NotADeadEndRemoval(usize),
    #[error("walk is not closed")]
    WalkNotClosed,
    #[error("vertex map has wrong length ({0} for {1} source vertices)")]
    MapLengthMismatch(usize, usize),
    #[error("start vertex does not lie over the walk's start")]
    LiftStartMismatch,
    #[error("no neighbour over {0} when lifting at {1}")]
    LiftMissing(VertexId, VertexId),
    #[error("several neighbours over {0} when lifting at {1}; not a covering map")]
    LiftAmbiguous(VertexId, VertexId),
    #[error("input is not a triangle")]
    NotATriangle,
    #[error("development conflict over base vertex {0}; input is not locally cyclic")]
    DevelopmentConflict(VertexId),
    #[error("development requires a locally cyclic graph of minimum degree >= 4")]
    DevelopmentPrecondition,
    #[error("graph must be connected")]
    NotConnected,
    #[error("every edge must lie in exactly two triangles")]
    NotAClosedSurface,
    #[error("generator is not a permutation of the vertex set")]
    NotAPermutation,
    #[error("generator is not a graph automorphism")]
    NotAnAutomorphism,
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

// ---------------------------------------------------------------------------
// Elementary moves and walk reduction
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MoveKind {
    TriangleInsert,
    TriangleRemove,
    DeadEndInsert,
    DeadEndRemove,
}

/// One elementary move on a walk. Positions index the walk's vertex
/// sequence; insertions act between `position` and `position + 1`, removals
/// act on the vertex at `position`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ElementaryMove {
    pub kind: MoveKind,
    pub position: usize,
    pub inserted: Option<VertexId>,
}

/// Applies a move, rejecting it when its side conditions fail. Start and end
/// vertices are never changed.
pub fn apply_move(graph: &Graph, walk: &Walk, mv: &ElementaryMove) -> Result<Walk, CoverError> {
    let verts = &walk.vertices;
    let last = verts.len() - 1;
    let mut out = verts.clone();
    match mv.kind {
        MoveKind::TriangleInsert => {
            let i = mv.position;
            if i >= last {
                return Err(CoverError::PositionOutOfRange(i, walk.len()));
            }
            let v = mv.inserted.ok_or(CoverError::MissingInsertVertex)?;
            let (a, b) = (verts[i], verts[i + 1]);
            if v == a || v == b || !graph.has_edge(v, a) || !graph.has_edge(v, b) {
                return Err(CoverError::NotATriangleInsertion(i));
            }
            out.insert(i + 1, v);
        }
        MoveKind::TriangleRemove => {
            let i = mv.position;
            if i == 0 || i >= last {
                return Err(CoverError::PositionOutOfRange(i, walk.len()));
            }
            let (a, b, c) = (verts[i - 1], verts[i], verts[i + 1]);
            if a == c || !graph.has_edge(a, b) || !graph.has_edge(b, c) || !graph.has_edge(a, c) {
                return Err(CoverError::NotATriangleRemoval(i));
            }
            out.remove(i);
        }
        MoveKind::DeadEndInsert => {
            let i = mv.position;
            if i > last {
                return Err(CoverError::PositionOutOfRange(i, walk.len()));
            }
            let v = mv.inserted.ok_or(CoverError::MissingInsertVertex)?;
            if !graph.has_edge(v, verts[i]) {
                return Err(CoverError::NotADeadEndInsertion(i));
            }
            out.insert(i + 1, verts[i]);
            out.insert(i + 1, v);
        }
        MoveKind::DeadEndRemove => {
            let i = mv.position;
            if i == 0 || i >= last {
                return Err(CoverError::PositionOutOfRange(i, walk.len()));
            }
            if verts[i - 1] != verts[i + 1] {
                return Err(CoverError::NotADeadEndRemoval(i));
            }
            out.drain(i..=i + 1);
        }
    }
    debug_assert_eq!(out.first(), verts.first());
    debug_assert_eq!(out.last(), verts.last());
    Walk::new(graph, out).map_err(CoverError::from)
}

#[derive(Debug, Clone)]
pub struct ReduceResult {
    /// Whether a trivial walk was reached within budget.
    pub trivial: bool,
    /// The shortest walk found.
    pub final_walk: Walk,
    /// Certificate: the move sequence from the input to `final_walk`.
    pub moves: Vec<ElementaryMove>,
    pub expanded: usize,
}

struct SearchNode {
    walk: Vec<VertexId>,
    parent: usize,
    mv: Option<ElementaryMove>,
}

#[derive(PartialEq, Eq)]
struct QueueEntry {
    len: usize,
    seq: usize,
    node: usize,
}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // min-heap on (len, seq)
        other.len.cmp(&self.len).then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Searches for a move sequence contracting a closed walk to a trivial one.
/// Best-first over walk length, removals preferred, memoised on the walk
/// sequence; `budget` counts expanded nodes. This is a semi-decision: a
/// `trivial: false` answer only means nothing was found within budget.
pub fn reduce_walk(graph: &Graph, walk: &Walk, budget: usize) -> Result<ReduceResult, CoverError> {
    if !walk.is_closed() {
        return Err(CoverError::WalkNotClosed);
    }
    let max_len = walk.len() + 4;
    let mut arena = vec![SearchNode { walk: walk.vertices.clone(), parent: usize::MAX, mv: None }];
    let mut seen: FxHashSet<Vec<VertexId>> = FxHashSet::default();
    seen.insert(walk.vertices.clone());
    let mut heap = BinaryHeap::new();
    heap.push(QueueEntry { len: walk.len(), seq: 0, node: 0 });
    let mut seq = 0usize;
    let mut expanded = 0usize;
    let mut best = 0usize;

    let reconstruct = |arena: &[SearchNode], mut idx: usize| {
        let mut moves = Vec::new();
        while arena[idx].parent != usize::MAX {
            moves.push(arena[idx].mv.unwrap());
            idx = arena[idx].parent;
        }
        moves.reverse();
        moves
    };

    while let Some(entry) = heap.pop() {
        let node = entry.node;
        if entry.len < arena[best].walk.len() - 1 {
            best = node;
        }
        if entry.len == 0 {
            let moves = reconstruct(&arena, node);
            let final_walk = Walk { vertices: arena[node].walk.clone() };
            return Ok(ReduceResult { trivial: true, final_walk, moves, expanded });
        }
        if expanded >= budget {
            break;
        }
        expanded += 1;

        let current = arena[node].walk.clone();
        let last = current.len() - 1;
        let mut push = |verts: Vec<VertexId>, mv: ElementaryMove,
                        arena: &mut Vec<SearchNode>,
                        seen: &mut FxHashSet<Vec<VertexId>>,
                        heap: &mut BinaryHeap<QueueEntry>| {
            if seen.insert(verts.clone()) {
                seq += 1;
                let len = verts.len() - 1;
                arena.push(SearchNode { walk: verts, parent: node, mv: Some(mv) });
                heap.push(QueueEntry { len, seq, node: arena.len() - 1 });
            }
        };

        // removals first
        for i in 1..last {
            if current[i - 1] == current[i + 1] {
                let mut next = current.clone();
                next.drain(i..=i + 1);
                let mv = ElementaryMove { kind: MoveKind::DeadEndRemove, position: i, inserted: None };
                push(next, mv, &mut arena, &mut seen, &mut heap);
            } else if graph.has_edge(current[i - 1], current[i + 1]) {
                let mut next = current.clone();
                next.remove(i);
                let mv = ElementaryMove { kind: MoveKind::TriangleRemove, position: i, inserted: None };
                push(next, mv, &mut arena, &mut seen, &mut heap);
            }
        }
        if current.len() - 1 < max_len {
            for i in 0..last {
                let (a, b) = (current[i], current[i + 1]);
                for &v in graph.neighbors(a) {
                    if v != b && graph.has_edge(v, b) {
                        let mut next = current.clone();
                        next.insert(i + 1, v);
                        let mv = ElementaryMove {
                            kind: MoveKind::TriangleInsert,
                            position: i,
                            inserted: Some(v),
                        };
                        push(next, mv, &mut arena, &mut seen, &mut heap);
                    }
                }
            }
        }
        if current.len() + 1 < max_len {
            for i in 0..=last {
                for &v in graph.neighbors(current[i]) {
                    let mut next = current.clone();
                    next.insert(i + 1, current[i]);
                    next.insert(i + 1, v);
                    let mv = ElementaryMove {
                        kind: MoveKind::DeadEndInsert,
                        position: i,
                        inserted: Some(v),
                    };
                    push(next, mv, &mut arena, &mut seen, &mut heap);
                }
            }
        }
    }

    let moves = reconstruct(&arena, best);
    let final_walk = Walk { vertices: arena[best].walk.clone() };
    Ok(ReduceResult { trivial: false, final_walk, moves, expanded })
}

// ---------------------------------------------------------------------------
// Covering maps and lifting
// ---------------------------------------------------------------------------

/// A candidate triangular covering map: a total vertex map that should
/// restrict to an isomorphism on every closed neighbourhood.
#[derive(Debug, Clone)]
pub struct CoveringMap<'g> {
    pub source: &'g Graph,
    pub target: &'g Graph,
    pub map: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub ok: bool,
    pub checked_vertices: usize,
    pub restricted: bool,
    pub failure: Option<String>,
}

impl<'g> CoveringMap<'g> {
    pub fn new(source: &'g Graph, target: &'g Graph, map: Vec<VertexId>) -> Result<Self, CoverError> {
        if map.len() != source.vertex_count() {
            return Err(CoverError::MapLengthMismatch(map.len(), source.vertex_count()));
        }
        for &v in &map {
            target.check_vertex(v)?;
        }
        Ok(CoveringMap { source, target, map })
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.map[v.index()]
    }

    /// Checks local isomorphy at every source vertex, or only at the given
    /// restriction (used for window hosts whose rim lacks full
    /// neighbourhoods). The report states whether it was restricted.
    pub fn validate(&self, restriction: Option<&[VertexId]>) -> CoverReport {
        let restricted = restriction.is_some();
        if !self.source.is_connected() || !self.target.is_connected() {
            return CoverReport {
                ok: false,
                checked_vertices: 0,
                restricted,
                failure: Some("source and target must be connected".into()),
            };
        }
        let vertices: Vec<VertexId> = match restriction {
            Some(set) => set.to_vec(),
            None => self.source.vertices().collect(),
        };
        for &vt in &vertices {
            let v = self.apply(vt);
            let nbhd_src: Vec<VertexId> = {
                let mut n = self.source.neighbors(vt).to_vec();
                n.push(vt);
                n
            };
            let nbhd_tgt = self.target.neighbourhood(v, true).unwrap();
            if nbhd_src.len() != nbhd_tgt.len() {
                return CoverReport {
                    ok: false,
                    checked_vertices: vertices.len(),
                    restricted,
                    failure: Some(format!(
                        "closed neighbourhood of {vt} has {} vertices but its image has {}",
                        nbhd_src.len(),
                        nbhd_tgt.len()
                    )),
                };
            }
            let mut images: Vec<VertexId> = nbhd_src.iter().map(|&x| self.apply(x)).collect();
            images.sort_unstable();
            images.dedup();
            if images != nbhd_tgt {
                return CoverReport {
                    ok: false,
                    checked_vertices: vertices.len(),
                    restricted,
                    failure: Some(format!("neighbourhood of {vt} does not map onto its image")),
                };
            }
            for (ai, &a) in nbhd_src.iter().enumerate() {
                for &b in nbhd_src.iter().skip(ai + 1) {
                    if self.source.has_edge(a, b) != self.target.has_edge(self.apply(a), self.apply(b)) {
                        return CoverReport {
                            ok: false,
                            checked_vertices: vertices.len(),
                            restricted,
                            failure: Some(format!(
                                "edges within the neighbourhood of {vt} are not preserved at ({a}, {b})"
                            )),
                        };
                    }
                }
            }
        }
        CoverReport { ok: true, checked_vertices: vertices.len(), restricted, failure: None }
    }

    /// The unique lift of a target walk starting at `start`.
    pub fn lift_walk(&self, walk: &Walk, start: VertexId) -> Result<Walk, CoverError> {
        if self.apply(start) != walk.vertices[0] {
            return Err(CoverError::LiftStartMismatch);
        }
        let mut out = vec![start];
        let mut current = start;
        for &next in &walk.vertices[1..] {
            current = self.lift_edge(current, next)?;
            out.push(current);
        }
        Walk::new(self.source, out).map_err(CoverError::from)
    }

    /// The unique neighbour of `from` lying over `target_nbr`.
    pub fn lift_edge(&self, from: VertexId, target_nbr: VertexId) -> Result<VertexId, CoverError> {
        let mut found = None;
        for &cand in self.source.neighbors(from) {
            if self.apply(cand) == target_nbr {
                if found.is_some() {
                    return Err(CoverError::LiftAmbiguous(target_nbr, from));
                }
                found = Some(cand);
            }
        }
        found.ok_or(CoverError::LiftMissing(target_nbr, from))
    }

    /// The unique triangle over `tri` through `u_tilde`.
    pub fn lift_triangle(&self, tri: [VertexId; 3], u_tilde: VertexId) -> Result<[VertexId; 3], CoverError> {
        let [a, b, c] = tri;
        if !(self.target.has_edge(a, b) && self.target.has_edge(b, c) && self.target.has_edge(a, c)) {
            return Err(CoverError::NotATriangle);
        }
        let u = self.apply(u_tilde);
        let (v, w) = if u == a {
            (b, c)
        } else if u == b {
            (a, c)
        } else if u == c {
            (a, b)
        } else {
            return Err(CoverError::LiftStartMismatch);
        };
        let v_tilde = self.lift_edge(u_tilde, v)?;
        let w_tilde = self.lift_edge(u_tilde, w)?;
        if !self.source.has_edge(v_tilde, w_tilde) {
            return Err(CoverError::DevelopmentConflict(u));
        }
        let mut out = [u_tilde, v_tilde, w_tilde];
        out.sort_unstable();
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Universal cover development
// ---------------------------------------------------------------------------

/// A developed ball of the universal triangular cover.
#[derive(Debug, Clone)]
pub struct Development {
    pub cover: Graph,
    /// Projection onto the base graph, by cover vertex.
    pub projection: Vec<VertexId>,
    pub base_lift: VertexId,
    /// Distance from the base lift, by cover vertex.
    pub distances: Vec<u32>,
    pub radius: u32,
}

impl Development {
    /// Vertices at distance strictly below the radius; the projection is a
    /// local isomorphism exactly there.
    pub fn interior(&self) -> Vec<VertexId> {
        self.distances
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d < self.radius)
            .map(|(i, _)| VertexId(i as u32))
            .collect()
    }

    pub fn cover_map<'g>(&'g self, base: &'g Graph) -> CoveringMap<'g> {
        CoveringMap { source: &self.cover, target: base, map: self.projection.clone() }
    }
}

/// The triangles around a vertex of a locally cyclic graph in rotation
/// order, each as a sorted triple.
pub fn triangle_fan(graph: &Graph, v: VertexId) -> Result<Vec<[VertexId; 3]>, CoverError> {
    let ring = rotation_of(graph, v)?;
    let mut out = Vec::with_capacity(ring.len());
    for i in 0..ring.len() {
        let mut tri = [v, ring[i], ring[(i + 1) % ring.len()]];
        tri.sort_unstable();
        out.push(tri);
    }
    Ok(out)
}

/// The induced cycle on the open neighbourhood of one vertex, normalised to
/// start at the smallest neighbour and proceed towards the smaller of its
/// two cycle neighbours.
pub fn rotation_of(graph: &Graph, v: VertexId) -> Result<Vec<VertexId>, CoverError> {
    if !graph.neighbourhood_is_cycle(v) {
        return Err(CoverError::DevelopmentPrecondition);
    }
    let nbrs = graph.neighbors(v);
    let within = |x: VertexId| -> Vec<VertexId> {
        nbrs.iter().copied().filter(|&y| y != x && graph.has_edge(x, y)).collect()
    };
    let start = nbrs[0];
    let around = within(start);
    let mut cycle = vec![start, *around.iter().min().unwrap()];
    loop {
        let cur = *cycle.last().unwrap();
        let prev = cycle[cycle.len() - 2];
        let next = within(cur).into_iter().find(|&x| x != prev).unwrap();
        if next == start {
            break;
        }
        cycle.push(next);
    }
    debug_assert_eq!(cycle.len(), nbrs.len());
    Ok(cycle)
}

/// Cyclic order of each open neighbourhood of a locally cyclic graph.
pub fn rotation_system(graph: &Graph) -> Result<Vec<Vec<VertexId>>, CoverError> {
    graph.vertices().map(|v| rotation_of(graph, v)).collect()
}

/// Develops the ball of the given radius around a lift of `base` in the
/// universal triangular cover, by iteratively gluing closed neighbourhoods.
/// For spherical inputs the development closes up to a finite cover.
pub fn develop_universal_cover(
    graph: &Graph,
    radius: u32,
    base: VertexId,
) -> Result<Development, CoverError> {
    let report = graph.is_locally_cyclic();
    if !report.ok || report.min_degree < 4 {
        return Err(CoverError::DevelopmentPrecondition);
    }
    graph.check_vertex(base)?;
    let rotations = rotation_system(graph)?;

    let mut projection = vec![base];
    let mut distances = vec![0u32];
    let mut lift: FxHashMap<(u32, VertexId), u32> = FxHashMap::default();
    let mut queue = VecDeque::new();
    queue.push_back(0u32);

    // connects two cover vertices, recording the unique-lift table entries;
    // a clash in the table is a development conflict
    fn connect(
        lift: &mut FxHashMap<(u32, VertexId), u32>,
        projection: &[VertexId],
        x: u32,
        y: u32,
    ) -> Result<(), CoverError> {
        for (a, b) in [(x, y), (y, x)] {
            let key = (a, projection[b as usize]);
            match lift.get(&key) {
                None => {
                    lift.insert(key, b);
                }
                Some(&existing) if existing == b => {}
                Some(_) => return Err(CoverError::DevelopmentConflict(projection[a as usize])),
            }
        }
        Ok(())
    }

    while let Some(vc) = queue.pop_front() {
        if distances[vc as usize] >= radius {
            continue;
        }
        let v = projection[vc as usize];
        let cycle = &rotations[v.index()];
        let d = cycle.len();
        let anchor = match cycle.iter().position(|&u| lift.contains_key(&(vc, u))) {
            Some(pos) => pos,
            None => {
                // fresh region: seed the fan with a new vertex over cycle[0]
                let fresh = projection.len() as u32;
                projection.push(cycle[0]);
                distances.push(distances[vc as usize] + 1);
                queue.push_back(fresh);
                connect(&mut lift, &projection, vc, fresh)?;
                0
            }
        };
        let mut current = lift[&(vc, cycle[anchor])];
        for step in 1..=d {
            let u_next = cycle[(anchor + step) % d];
            let existing = lift
                .get(&(vc, u_next))
                .or_else(|| lift.get(&(current, u_next)))
                .copied();
            let x = match existing {
                Some(x) => x,
                None => {
                    let fresh = projection.len() as u32;
                    projection.push(u_next);
                    distances.push(distances[vc as usize] + 1);
                    queue.push_back(fresh);
                    fresh
                }
            };
            connect(&mut lift, &projection, vc, x)?;
            connect(&mut lift, &projection, current, x)?;
            current = x;
        }
    }

    let mut edges = Vec::with_capacity(lift.len() / 2);
    for (&(a, _), &b) in &lift {
        if a < b {
            edges.push((a, b));
        }
    }
    let cover = Graph::new(projection.len(), &edges)?;
    Ok(Development { cover, projection, base_lift: VertexId(0), distances, radius })
}

// ---------------------------------------------------------------------------
// Group actions, quotients, Galois covers
// ---------------------------------------------------------------------------

/// Guards closure computation against accidentally huge groups.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// A finitely generated automorphism action: each generator is a vertex
/// permutation preserving adjacency.
#[derive(Debug, Clone)]
pub struct GroupAction {
    degree: usize,
    pub generators: Vec<Vec<VertexId>>,
}

impl GroupAction {
    pub fn new(graph: &Graph, generators: Vec<Vec<VertexId>>) -> Result<GroupAction, CoverError> {
        let n = graph.vertex_count();
        for perm in &generators {
            if perm.len() != n {
                return Err(CoverError::NotAPermutation);
            }
            let mut seen = vec![false; n];
            for &v in perm {
                if v.index() >= n || seen[v.index()] {
                    return Err(CoverError::NotAPermutation);
                }
                seen[v.index()] = true;
            }
            for (u, v) in graph.edges() {
                if !graph.has_edge(perm[u.index()], perm[v.index()]) {
                    return Err(CoverError::NotAnAutomorphism);
                }
            }
        }
        Ok(GroupAction { degree: n, generators })
    }

    pub fn trivial(degree: usize) -> GroupAction {
        GroupAction { degree, generators: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Orbit id per vertex; orbits are numbered by their smallest member.
    pub fn orbits(&self, n: usize) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], x: u32) -> u32 {
            let mut root = x;
            while parent[root as usize] != root {
                root = parent[root as usize];
            }
            let mut cur = x;
            while parent[cur as usize] != root {
                let next = parent[cur as usize];
                parent[cur as usize] = root;
                cur = next;
            }
            root
        }
        for perm in &self.generators {
            for v in 0..n as u32 {
                let a = find(&mut parent, v);
                let b = find(&mut parent, perm[v as usize].0);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
        let mut ids = FxHashMap::default();
        let mut out = Vec::with_capacity(n);
        for v in 0..n as u32 {
            let root = find(&mut parent, v);
            let next_id = ids.len() as u32;
            let id = *ids.entry(root).or_insert(next_id);
            out.push(id);
        }
        out
    }

    /// All group elements reachable from the generators, capped. The default
    /// cap used by callers is 10^4.
    pub fn closure(&self, cap: usize) -> Result<Vec<Vec<VertexId>>, CoverError> {
        let identity: Vec<VertexId> = (0..self.degree as u32).map(VertexId).collect();
        let mut seen: FxHashSet<Vec<VertexId>> = FxHashSet::default();
        seen.insert(identity.clone());
        let mut out = vec![identity];
        let mut frontier = 0;
        while frontier < out.len() {
            let current = out[frontier].clone();
            frontier += 1;
            for perm in &self.generators {
                let composed: Vec<VertexId> =
                    current.iter().map(|&v| perm[v.index()]).collect();
                if seen.insert(composed.clone()) {
                    if out.len() >= cap {
                        return Err(CoverError::ClosureCapExceeded(cap));
                    }
                    out.push(composed);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub quotient: Graph,
    /// Orbit id per source vertex.
    pub projection: Vec<u32>,
    pub loops_dropped: usize,
    pub parallel_collapsed: usize,
}

/// Quotient by the orbit partition; orbits are adjacent when they contain
/// adjacent representatives. Loops and parallel edges collapse, counted.
pub fn quotient_graph(graph: &Graph, action: &GroupAction) -> QuotientResult {
    let n = graph.vertex_count();
    let projection = action.orbits(n);
    let orbit_count = projection.iter().map(|&o| o + 1).max().unwrap_or(0) as usize;
    let mut loops_dropped = 0usize;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (u, v) in graph.edges() {
        let (a, b) = (projection[u.index()], projection[v.index()]);
        if a == b {
            loops_dropped += 1;
        } else {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    let parallel_collapsed = before - edges.len();
    let quotient = Graph::new(orbit_count, &edges).expect("orbit ids are dense");
    QuotientResult { quotient, projection, loops_dropped, parallel_collapsed }
}

#[derive(Debug, Clone)]
pub struct GaloisReport {
    pub ok: bool,
    pub fibres_are_orbits: bool,
    pub deck_property: bool,
    pub failure: Option<String>,
}

/// Checks that the vertex preimages of `p` are exactly the orbits of the
/// action, and that every generator is a deck transformation (p ∘ γ = p).
pub fn is_galois(p: &CoveringMap<'_>, action: &GroupAction) -> GaloisReport {
    let n = p.source.vertex_count();
    let mut deck_property = true;
    let mut failure = None;
    'outer: for (gi, perm) in action.generators.iter().enumerate() {
        for (v, image) in perm.iter().enumerate() {
            if p.map[image.index()] != p.map[v] {
                deck_property = false;
                failure = Some(format!("generator {gi} does not commute with the projection at vertex {v}"));
                break 'outer;
            }
        }
    }
    let orbits = action.orbits(n);
    let mut orbit_to_fibre: FxHashMap<u32, VertexId> = FxHashMap::default();
    let mut fibre_to_orbit: FxHashMap<VertexId, u32> = FxHashMap::default();
    let mut fibres_are_orbits = true;
    for (v, &orbit) in orbits.iter().enumerate() {
        let fibre = p.map[v];
        let o_entry = orbit_to_fibre.entry(orbit).or_insert(fibre);
        let f_entry = fibre_to_orbit.entry(fibre).or_insert(orbit);
        if *o_entry != fibre || *f_entry != orbit {
            fibres_are_orbits = false;
            if failure.is_none() {
                failure = Some(format!("fibre of {fibre} and orbit {orbit} disagree at vertex {v}"));
            }
            break;
        }
    }
    GaloisReport { ok: deck_property && fibres_are_orbits, fibres_are_orbits, deck_property, failure }
}

// ---------------------------------------------------------------------------
// Walk correspondence and surface classification
// ---------------------------------------------------------------------------

/// Given a closed walk in the clique graph, produces a corresponding closed
/// host walk: pick the least vertex of each consecutive intersection and
/// drop repeats.
pub fn corresponding_walk(host: &Graph, kg: &CliqueGraph, walk: &Walk) -> Result<Walk, CoverError> {
    if !walk.is_closed() {
        return Err(CoverError::WalkNotClosed);
    }
    let q = |i: usize| -> &[VertexId] { &kg.members[walk.vertices[i].index()] };
    if walk.is_trivial() {
        return Ok(Walk::trivial(q(0)[0]));
    }
    let len = walk.len();
    let mut picks = Vec::with_capacity(len + 1);
    for i in 1..=len {
        let (a, b) = (q(i - 1), q(i));
        let pick = a
            .iter()
            .find(|v| b.binary_search(v).is_ok())
            .copied()
            .expect("adjacent cliques intersect");
        picks.push(pick);
    }
    let mut vertices = vec![*picks.last().unwrap()];
    vertices.extend_from_slice(&picks);
    vertices.dedup();
    if vertices.len() == 1 {
        return Ok(Walk { vertices });
    }
    Walk::new(host, vertices).map_err(CoverError::from)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TscReport {
    /// Whether every closed walk is contractible; for a closed surface this
    /// holds exactly for Euler characteristic two.
    pub tsc: bool,
    pub chi: i64,
}

/// Surface-classification shortcut: a connected locally cyclic graph whose
/// edges each lie in two triangles triangulates a closed surface, which is
/// simply connected exactly when its Euler characteristic is two.
pub fn is_tsc_locally_cyclic(graph: &Graph) -> Result<TscReport, CoverError> {
    let report = graph.is_locally_cyclic();
    if !report.ok {
        return Err(CoverError::DevelopmentPrecondition);
    }
    if !graph.is_connected() {
        return Err(CoverError::NotConnected);
    }
    if !graph.every_edge_in_two_triangles() {
        return Err(CoverError::NotAClosedSurface);
    }
    let chi = graph.euler_characteristic()?;
    Ok(TscReport { tsc: chi == 2, chi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::octahedron;
    use crate::hexgeo::{hex_window, torus_graph, window_to_torus_map, TorusSpec, WindowSpec};

    fn k3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn moves_apply_and_reject() {
        let g = k3();
        let w = Walk::new(&g, vec![VertexId(0), VertexId(1), VertexId(2)]).unwrap();
        let removed = apply_move(
            &g,
            &w,
            &ElementaryMove { kind: MoveKind::TriangleRemove, position: 1, inserted: None },
        )
        .unwrap();
        assert_eq!(removed.vertices, vec![VertexId(0), VertexId(2)]);

        let w = Walk::trivial(VertexId(0));
        let inserted = apply_move(
            &g,
            &w,
            &ElementaryMove { kind: MoveKind::DeadEndInsert, position: 0, inserted: Some(VertexId(1)) },
        )
        .unwrap();
        assert_eq!(inserted.vertices, vec![VertexId(0), VertexId(1), VertexId(0)]);

        // no triangle on a path edge
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let w = Walk::new(&path, vec![VertexId(0), VertexId(1)]).unwrap();
        assert!(apply_move(
            &path,
            &w,
            &ElementaryMove { kind: MoveKind::TriangleInsert, position: 0, inserted: Some(VertexId(2)) },
        )
        .is_err());
    }

    #[test]
    fn moves_preserve_endpoints() {
        let g = octahedron();
        let w = Walk::new(&g, vec![VertexId(0), VertexId(1), VertexId(2), VertexId(0)]).unwrap();
        for kind in [MoveKind::TriangleInsert, MoveKind::DeadEndInsert] {
            for pos in 0..w.len() {
                for v in g.vertices() {
                    let mv = ElementaryMove { kind, position: pos, inserted: Some(v) };
                    if let Ok(next) = apply_move(&g, &w, &mv) {
                        assert_eq!(next.start(), w.start());
                        assert_eq!(next.end(), w.end());
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_triangle_boundary() {
        let g = k3();
        let w = Walk::new(&g, vec![VertexId(0), VertexId(1), VertexId(2), VertexId(0)]).unwrap();
        let result = reduce_walk(&g, &w, 10_000).unwrap();
        assert!(result.trivial);
        assert!(result.moves.len() <= 2);
        // replay the certificate
        let mut replay = w;
        for mv in &result.moves {
            replay = apply_move(&g, &replay, mv).unwrap();
        }
        assert!(replay.is_trivial());
    }

    #[test]
    fn reduce_hexagon_around_a_vertex() {
        let w = hex_window(&WindowSpec { center: [0, 0, 0], radius: 2 });
        let center = w.vertex_at(crate::hexgeo::HexCoord(0, 0, 0)).unwrap();
        let ring: Vec<VertexId> = w.graph.neighbors(center).to_vec();
        // order the ring into a closed walk
        let mut cycle = vec![ring[0]];
        let mut prev = None;
        while cycle.len() < ring.len() {
            let cur = *cycle.last().unwrap();
            let next = ring
                .iter()
                .copied()
                .find(|&x| Some(x) != prev && x != cur && w.graph.has_edge(cur, x))
                .unwrap();
            prev = Some(cur);
            cycle.push(next);
        }
        cycle.push(ring[0]);
        let walk = Walk::new(&w.graph, cycle).unwrap();
        let result = reduce_walk(&w.graph, &walk, 100_000).unwrap();
        assert!(result.trivial, "hexagon walk must contract");
        let mut replay = walk;
        for mv in &result.moves {
            replay = apply_move(&w.graph, &replay, mv).unwrap();
        }
        assert!(replay.is_trivial());
    }

    #[test]
    fn essential_torus_cycle_does_not_reduce() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let cycle: Vec<VertexId> = (0..=5).map(|i| t.project_axial(i % 5, 0)).collect();
        let walk = Walk::new(&t.graph, cycle).unwrap();
        let result = reduce_walk(&t.graph, &walk, 20_000).unwrap();
        assert!(!result.trivial);
    }

    #[test]
    fn identity_is_a_covering_map() {
        let g = octahedron();
        let map: Vec<VertexId> = g.vertices().collect();
        let p = CoveringMap::new(&g, &g, map).unwrap();
        assert!(p.validate(None).ok);
    }

    #[test]
    fn constant_map_is_not_a_covering_map() {
        let g = k3();
        let k1 = Graph::new(1, &[]).unwrap();
        let p = CoveringMap::new(&g, &k1, vec![VertexId(0); 3]).unwrap();
        assert!(!p.validate(None).ok);
    }

    #[test]
    fn window_to_torus_is_a_cover_on_the_interior() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let w = hex_window(&WindowSpec { center: [0, 0, 0], radius: 6 });
        let p = CoveringMap::new(&w.graph, &t.graph, window_to_torus_map(&w, &t).unwrap()).unwrap();
        let interior: Vec<VertexId> = w
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() < 6)
            .map(|(i, _)| VertexId(i as u32))
            .collect();
        let report = p.validate(Some(&interior));
        assert!(report.ok, "{:?}", report.failure);
        assert!(report.restricted);
        // full validation fails at the rim
        assert!(!p.validate(None).ok);
    }

    #[test]
    fn lifting_walks_and_triangles() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let w = hex_window(&WindowSpec { center: [0, 0, 0], radius: 8 });
        let map = window_to_torus_map(&w, &t).unwrap();
        let p = CoveringMap::new(&w.graph, &t.graph, map).unwrap();
        let start = w.vertex_at(crate::hexgeo::HexCoord(0, 0, 0)).unwrap();

        // essential cycle lifts open
        let cycle: Vec<VertexId> = (0..=5).map(|i| t.project_axial(i % 5, 0)).collect();
        let walk = Walk::new(&t.graph, cycle).unwrap();
        let lift = p.lift_walk(&walk, start).unwrap();
        assert_ne!(lift.start(), lift.end());
        assert!(!lift.is_closed());

        // lift uniqueness: re-derivation gives the same walk
        let again = p.lift_walk(&walk, start).unwrap();
        assert_eq!(lift, again);

        // a trivial walk lifts to the trivial walk at the start
        let trivial = Walk::trivial(t.project_axial(0, 0));
        assert_eq!(p.lift_walk(&trivial, start).unwrap(), Walk::trivial(start));

        // triangle lifting: one lift per fibre point, and non-triangles are
        // rejected
        let tri = t.graph.triangles()[0];
        let fibre: Vec<VertexId> = w
            .graph
            .vertices()
            .filter(|&v| p.apply(v) == tri[0] && w.coords[v.index()].norm() < 7)
            .collect();
        for u_tilde in fibre {
            let lifted = p.lift_triangle(tri, u_tilde).unwrap();
            let mut image: Vec<VertexId> = lifted.iter().map(|&x| p.apply(x)).collect();
            image.sort_unstable();
            assert_eq!(image, tri.to_vec());
        }
        let a = t.project_axial(0, 0);
        let far = t.project_axial(2, 0);
        let other = t.project_axial(3, 0);
        assert!(matches!(
            p.lift_triangle([a, far, other], start),
            Err(CoverError::NotATriangle)
        ));
    }

    #[test]
    fn development_of_a_sphere_closes_up() {
        let g = octahedron();
        let dev = develop_universal_cover(&g, 4, VertexId(0)).unwrap();
        assert_eq!(dev.cover.vertex_count(), 6);
        assert_eq!(dev.cover.edge_count(), 12);
        let p = dev.cover_map(&g);
        assert!(p.validate(None).ok);
    }

    #[test]
    fn development_of_torus_is_a_lattice_ball() {
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let dev = develop_universal_cover(&t.graph, 3, VertexId(0)).unwrap();
        let w = hex_window(&WindowSpec { center: [0, 0, 0], radius: 3 });
        assert_eq!(dev.cover.vertex_count(), w.graph.vertex_count());
        assert_eq!(dev.cover.edge_count(), w.graph.edge_count());
        let p = dev.cover_map(&t.graph);
        let report = p.validate(Some(&dev.interior()));
        assert!(report.ok, "{:?}", report.failure);
    }

    #[test]
    fn development_of_the_icosahedron_closes_up() {
        let g = crate::graph::icosahedron();
        for radius in [3u32, 5] {
            let dev = develop_universal_cover(&g, radius, VertexId(0)).unwrap();
            assert_eq!(dev.cover.vertex_count(), 12);
            assert_eq!(dev.cover.edge_count(), 30);
            assert!(dev.cover_map(&g).validate(None).ok);
        }
    }

    #[test]
    fn development_rejects_windows_and_low_degrees() {
        let w = hex_window(&WindowSpec { center: [0, 0, 0], radius: 3 });
        assert!(develop_universal_cover(&w.graph, 2, VertexId(0)).is_err());
        // K4 is locally cyclic but below the minimum degree for development
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(develop_universal_cover(&k4, 2, VertexId(0)).is_err());
    }

    #[test]
    fn quotients() {
        let g = k3();
        // trivial action: quotient is the graph itself
        let q = quotient_graph(&g, &GroupAction::trivial(3));
        assert_eq!(q.quotient, g);
        // full symmetric action on K3: single orbit
        let action = GroupAction::new(
            &g,
            vec![
                vec![VertexId(1), VertexId(2), VertexId(0)],
                vec![VertexId(1), VertexId(0), VertexId(2)],
            ],
        )
        .unwrap();
        let q = quotient_graph(&g, &action);
        assert_eq!(q.quotient.vertex_count(), 1);
        assert_eq!(q.loops_dropped, 3);
    }

    #[test]
    fn galois_checks() {
        let g = k3();
        let map: Vec<VertexId> = g.vertices().collect();
        let p = CoveringMap::new(&g, &g, map).unwrap();
        assert!(is_galois(&p, &GroupAction::trivial(3)).ok);

        use crate::hexgeo::{deck_translations, torus_to_torus_map};
        let base = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        let cover = torus_graph(&TorusSpec { basis: [[10, 0], [0, 10]] }).unwrap();
        let map = torus_to_torus_map(&cover, &base).unwrap();
        let p = CoveringMap::new(&cover.graph, &base.graph, map).unwrap();
        assert!(p.validate(None).ok);
        let deck = deck_translations(&cover, &base.spec);
        let report = is_galois(&p, &deck);
        assert!(report.ok, "{:?}", report.failure);
        // a too-small action splits the fibres
        let half = GroupAction::new(&cover.graph, vec![cover.translation_by(5, 0)]).unwrap();
        let report = is_galois(&p, &half);
        assert!(!report.ok && report.deck_property && !report.fibres_are_orbits);
        // quotient by the deck group recovers the base
        let q = quotient_graph(&cover.graph, &deck);
        assert_eq!(q.quotient.vertex_count(), base.graph.vertex_count());
        assert_eq!(q.quotient.edge_count(), base.graph.edge_count());
    }

    #[test]
    fn closure_caps() {
        let g = octahedron();
        let rot = GroupAction::new(
            &g,
            vec![vec![
                VertexId(1),
                VertexId(2),
                VertexId(0),
                VertexId(4),
                VertexId(5),
                VertexId(3),
            ]],
        )
        .unwrap();
        assert_eq!(rot.closure(100).unwrap().len(), 3);
        assert!(matches!(rot.closure(2), Err(CoverError::ClosureCapExceeded(2))));
    }

    #[test]
    fn every_short_closed_walk_on_a_sphere_contracts() {
        let g = octahedron();
        assert!(is_tsc_locally_cyclic(&g).unwrap().tsc);
        // every closed walk of length at most eight from vertex 0; the
        // octahedron is vertex-transitive, so one base covers all
        let mut stack: Vec<Vec<VertexId>> = vec![vec![VertexId(0)]];
        let mut closed = Vec::new();
        while let Some(walk) = stack.pop() {
            if walk.len() > 1 && walk.first() == walk.last() {
                closed.push(walk.clone());
            }
            if walk.len() <= 8 {
                for &n in g.neighbors(*walk.last().unwrap()) {
                    let mut next = walk.clone();
                    next.push(n);
                    stack.push(next);
                }
            }
        }
        assert!(closed.len() > 5000);
        for vertices in closed {
            let walk = Walk::new(&g, vertices).unwrap();
            let result = reduce_walk(&g, &walk, 50_000).unwrap();
            assert!(result.trivial, "walk {:?} did not contract", walk.vertices);
        }
    }

    #[test]
    fn corresponding_walks() {
        use crate::cliques::clique_graph;
        let g = octahedron();
        let kg = clique_graph(&g);
        // a trivial clique walk corresponds to a trivial host walk at the
        // least member
        let q = VertexId(3);
        let walk = corresponding_walk(&g, &kg, &Walk::trivial(q)).unwrap();
        assert_eq!(walk.vertices, vec![kg.members[3][0]]);
        // a 2-cycle stays inside the union of the two cliques
        let (a, b) = kg.graph.edges().next().unwrap();
        let two = Walk::new(&kg.graph, vec![a, b, a]).unwrap();
        let walk = corresponding_walk(&g, &kg, &two).unwrap();
        assert!(walk.is_closed());
        for v in &walk.vertices {
            assert!(kg.members[a.index()].contains(v) || kg.members[b.index()].contains(v));
        }
    }

    #[test]
    fn tsc_by_euler_characteristic() {
        assert_eq!(
            is_tsc_locally_cyclic(&octahedron()).unwrap(),
            TscReport { tsc: true, chi: 2 }
        );
        assert_eq!(
            is_tsc_locally_cyclic(&crate::graph::icosahedron()).unwrap(),
            TscReport { tsc: true, chi: 2 }
        );
        let t = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
        assert_eq!(is_tsc_locally_cyclic(&t.graph).unwrap(), TscReport { tsc: false, chi: 0 });
    }
}
