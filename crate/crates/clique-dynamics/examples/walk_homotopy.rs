//! Walk homotopy by elementary moves: triangles and dead ends are inserted
//! and removed until a closed walk contracts to a point, or provably
//! refuses to within the search budget.
//!
//!     cargo run --release --example walk_homotopy

use clique_dynamics::covers::{apply_move, reduce_walk, rotation_of};
use clique_dynamics::graph::{VertexId, Walk};
use clique_dynamics::hexgeo::{hex_window, torus_graph, HexCoord, TorusSpec, WindowSpec};

fn main() {
    let window = hex_window(&WindowSpec { center: [0, 0, 0], radius: 3 });
    let center = window.vertex_at(HexCoord(0, 0, 0)).unwrap();

    // the hexagon around a vertex contracts: one insertion opens a fan of
    // triangle removals
    let mut ring = rotation_of(&window.graph, center).unwrap();
    ring.push(ring[0]);
    let walk = Walk::new(&window.graph, ring).unwrap();
    let result = reduce_walk(&window.graph, &walk, 100_000).unwrap();
    println!("hexagon around a vertex: length {} walk", walk.len());
    let mut current = walk;
    for mv in &result.moves {
        current = apply_move(&window.graph, &current, mv).unwrap();
        println!("  {:?} at {} -> {:?}", mv.kind, mv.position, current.vertices);
    }
    println!("trivial: {} ({} nodes expanded)\n", result.trivial, result.expanded);

    // an essential cycle on a torus never contracts; the budget turns the
    // undecidable question into a bounded search report
    let torus = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
    let cycle: Vec<VertexId> = (0..=5).map(|i| torus.project_axial(i % 5, 0)).collect();
    let walk = Walk::new(&torus.graph, cycle).unwrap();
    let result = reduce_walk(&torus.graph, &walk, 50_000).unwrap();
    println!(
        "essential torus cycle: trivial = {}, shortest walk found has length {} ({} nodes expanded)",
        result.trivial,
        result.final_walk.len(),
        result.expanded
    );
}
