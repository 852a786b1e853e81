//! A single vertex of degree seven changes the local dynamics: its
//! level-graph degree is 3·7 = 21 (never 26), and the region around it is
//! free of side-3 shapes, so levels 1 and 3 agree there, the local
//! fingerprint of clique convergence for degrees above six.
//!
//!     cargo run --release --example cone_curvature

use clique_dynamics::graph::VertexId;
use clique_dynamics::hexgeo::cone_lattice;
use clique_dynamics::trishapes::geo_clique_graph;

fn main() {
    let cone = cone_lattice(7, 10).unwrap();
    println!(
        "cone lattice: apex degree {}, {} vertices, locally cyclic: {}",
        cone.graph.degree(cone.apex),
        cone.graph.vertex_count(),
        cone.graph.neighbourhood_is_cycle(cone.apex)
    );

    let g2 = geo_clique_graph(&cone.graph, 2);
    let apex_shape = g2.catalogue.find(0, &[cone.apex]).unwrap();
    println!(
        "level 2: apex degree {} = 3 x 7, profile {:?}",
        g2.graph.degree(VertexId(apex_shape)),
        g2.neighbour_type_profile(apex_shape)
    );
    let flat_neighbour = g2.catalogue.find(0, &[cone.graph.neighbors(cone.apex)[0]]).unwrap();
    println!(
        "         a degree-6 neighbour has degree {} instead",
        g2.graph.degree(VertexId(flat_neighbour))
    );

    // no side-3 shape fits inside the apex ball of radius two, so the
    // level-1 and level-3 graphs agree on that region
    let dist = cone.graph.distances_from(&[cone.apex]);
    let g1 = geo_clique_graph(&cone.graph, 1);
    let g3 = geo_clique_graph(&cone.graph, 3);
    let in_ball = |verts: &[VertexId]| verts.iter().all(|v| dist[v.index()].unwrap() <= 2);
    let side3_in_ball = g3
        .catalogue
        .shapes
        .iter()
        .filter(|s| s.side == 3 && in_ball(&s.verts))
        .count();
    let region: Vec<VertexId> = (0..g1.catalogue.len() as u32)
        .filter(|&s| in_ball(&g1.catalogue.shapes[s as usize].verts))
        .map(VertexId)
        .collect();
    let (sub1, _) = g1.graph.induced(&region);
    let (sub3, _) = g3.graph.induced(&region);
    println!(
        "apex ball of radius 2: {} side-3 shapes, {} side-1 shapes, levels 1 and 3 identical there: {}",
        side3_in_ball,
        region.len(),
        sub1 == sub3
    );
}
