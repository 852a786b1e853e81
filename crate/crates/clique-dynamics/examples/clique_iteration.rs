//! Iterate the clique operator on small triangulated surfaces and watch the
//! vertex counts: flat surfaces (tori) grow without bound, spheres cycle.
//!
//!     cargo run --release --example clique_iteration

use clique_dynamics::cliques::{iterate_clique_graph, max_cliques};
use clique_dynamics::graph::octahedron;
use clique_dynamics::hexgeo::{torus_graph, TorusSpec};

fn main() {
    let torus = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
    println!(
        "host: 6-regular torus, {} vertices, {} triangles",
        torus.graph.vertex_count(),
        torus.graph.triangles().len()
    );
    println!("{:>5} {:>10} {:>10} {:>10}", "level", "vertices", "edges", "max clique");
    let it = iterate_clique_graph(&torus.graph, 4, 500_000);
    let mut hosts = vec![torus.graph.clone()];
    hosts.extend(it.levels.iter().map(|l| l.graph.clone()));
    for (i, g) in hosts.iter().enumerate() {
        let largest = max_cliques(g).iter().map(|c| c.len()).max().unwrap();
        println!("{i:>5} {:>10} {:>10} {:>10}", g.vertex_count(), g.edge_count(), largest);
    }
    if it.budget_hit {
        println!("(stopped at the vertex budget)");
    }
    println!();

    // the octahedron is a sphere; its iterates grow too, but the first step
    // is already a different animal: eight faces, antipodal pairs apart
    let oct = octahedron();
    let it = iterate_clique_graph(&oct, 3, 500_000);
    print!("octahedron iterate sizes: {}", oct.vertex_count());
    for level in &it.levels {
        print!(" -> {}", level.graph.vertex_count());
    }
    println!();
}
