//! Build the geometric clique graph of a lattice window: its vertices are
//! the triangular-shaped subgraphs, its typed adjacencies come in side gaps
//! 0, ±2, ±4, ±6. Deep inside the window, a shape reaches degree 26 exactly
//! when the level still has room for its bigger enclosure. That knife edge is what
//! the divergence invariant measures.
//!
//!     cargo run --release --example geometric_clique_graph

use clique_dynamics::graph::VertexId;
use clique_dynamics::hexgeo::{hex_window, HexCoord, WindowSpec};
use clique_dynamics::trishapes::{deg26_census, geo_clique_graph};

fn main() {
    let window = hex_window(&WindowSpec { center: [0, 0, 0], radius: 14 });
    let level = 6;
    let gcg = geo_clique_graph(&window.graph, level);
    println!(
        "window radius 14 ({} vertices), level {level}: {} shapes, {} edges",
        window.graph.vertex_count(),
        gcg.graph.vertex_count(),
        gcg.graph.edge_count()
    );
    println!("shapes per side: {:?}", gcg.catalogue.side_histogram());

    // the neighbour profile of the central vertex, by signed type
    let center = window.vertex_at(HexCoord(0, 0, 0)).unwrap();
    let shape = gcg.catalogue.find(0, &[center]).unwrap();
    println!(
        "central vertex: degree {} with profile {:?}",
        gcg.graph.degree(VertexId(shape)),
        gcg.neighbour_type_profile(shape)
    );

    // a deep side-6 shape sees the full 26 = 6 + 2(3 + 3 + 3 + 1)
    let deep6 = (0..gcg.catalogue.len() as u32)
        .find(|&s| gcg.catalogue.side(s) == 6 && gcg.shape_rim_distance(s) >= 8)
        .unwrap();
    println!(
        "deep side-6 shape: degree {} with profile {:?}",
        gcg.graph.degree(VertexId(deep6)),
        gcg.neighbour_type_profile(deep6)
    );

    let census = deg26_census(&gcg, 8);
    println!(
        "census at margin 8: {} shapes of degree 26, {} others, {} too close to the rim",
        census.deg26.len(),
        census.not26.len(),
        census.excluded.len()
    );
    println!("classified by side (degree 26, other): {:?}", census.by_side);
}
