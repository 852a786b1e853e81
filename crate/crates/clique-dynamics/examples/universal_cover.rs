//! Develop a ball of the universal triangular cover of a torus, lift walks
//! through it, and factor the covering through a group of deck
//! translations.
//!
//!     cargo run --release --example universal_cover

use clique_dynamics::covers::{
    develop_universal_cover, is_galois, quotient_graph, reduce_walk, CoveringMap,
};
use clique_dynamics::graph::{VertexId, Walk};
use clique_dynamics::hexgeo::{
    deck_translations, hex_window, torus_graph, torus_to_torus_map, TorusSpec, WindowSpec,
};
use clique_dynamics::iso::are_isomorphic;

fn main() {
    let torus = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();

    // the development of a flat torus unrolls into the hexagonal lattice
    let dev = develop_universal_cover(&torus.graph, 6, VertexId(0)).unwrap();
    let ball = hex_window(&WindowSpec { center: [0, 0, 0], radius: 6 });
    let iso = are_isomorphic(&dev.cover, &ball.graph).unwrap().is_some();
    println!(
        "radius-6 development: {} vertices, isomorphic to the lattice ball: {iso}",
        dev.cover.vertex_count()
    );
    let p = dev.cover_map(&torus.graph);
    println!(
        "projection is a local isomorphism on the {}-vertex interior: {}",
        dev.interior().len(),
        p.validate(Some(&dev.interior())).ok
    );

    // an essential cycle lifts to an open path; a contractible walk closes up
    let essential: Vec<VertexId> = (0..=5).map(|i| torus.project_axial(i % 5, 0)).collect();
    let essential = Walk::new(&torus.graph, essential).unwrap();
    let lift = p.lift_walk(&essential, dev.base_lift).unwrap();
    println!(
        "essential 5-cycle lifts open: start {} vs end {}",
        lift.start(),
        lift.end()
    );
    let tri = torus.graph.triangles()[0];
    let contractible = Walk::new(&torus.graph, vec![tri[0], tri[1], tri[2], tri[0]]).unwrap();
    let reduction = reduce_walk(&torus.graph, &contractible, 10_000).unwrap();
    let start = dev
        .cover
        .vertices()
        .find(|&v| dev.projection[v.index()] == contractible.start() && dev.distances[v.index()] <= 2)
        .unwrap();
    let lift = p.lift_walk(&contractible, start).unwrap();
    println!(
        "triangle boundary: contractible in {} moves, lift closed: {}",
        reduction.moves.len(),
        lift.is_closed()
    );

    // a finite Galois picture: the four-fold torus cover and its deck group
    let cover = torus_graph(&TorusSpec { basis: [[10, 0], [0, 10]] }).unwrap();
    let map = torus_to_torus_map(&cover, &torus).unwrap();
    let p = CoveringMap::new(&cover.graph, &torus.graph, map).unwrap();
    let deck = deck_translations(&cover, &torus.spec);
    println!(
        "torus(10,10) -> torus(5,5): covering map {}, Galois with the deck translations: {}",
        p.validate(None).ok,
        is_galois(&p, &deck).ok
    );
    let q = quotient_graph(&cover.graph, &deck);
    println!(
        "quotient by the deck group: {} vertices, isomorphic to the base: {}",
        q.quotient.vertex_count(),
        are_isomorphic(&q.quotient, &torus.graph).unwrap().is_some()
    );
}
