//! The explicit map from a level graph onto the cliques of the level below:
//! every shape's image is assembled from its aligned sub-shapes, its corner
//! super-shapes, its distance-one enclosure, and a side-dependent case
//! term. The result is checked to be an isomorphism onto the clique graph.
//!
//!     cargo run --release --example explicit_c_map

use clique_dynamics::cliques::clique_graph;
use clique_dynamics::hexgeo::{torus_graph, TorusSpec};
use clique_dynamics::iso::{explicit_c_map, quotient_geo_clique_graph, verify_c};

fn main() {
    let torus = torus_graph(&TorusSpec { basis: [[5, 0], [0, 5]] }).unwrap();
    let levels: Vec<_> = (0..=3u32)
        .map(|l| quotient_geo_clique_graph(&torus, l).unwrap())
        .collect();

    for upper in [2usize, 3] {
        let map = explicit_c_map(&levels[upper], &levels[upper - 1], &torus.graph, 0);
        let kg_lower = clique_graph(&levels[upper - 1].graph);
        let report = verify_c(&levels[upper], &levels[upper - 1], &kg_lower, &map, &torus.graph);
        println!(
            "level {upper} -> cliques of level {}: {} shapes checked, all four checks {}",
            upper - 1,
            report.checked,
            if report.ok() { "pass" } else { "FAIL" }
        );

        // dissect one image per side
        let mut seen = std::collections::BTreeSet::new();
        for (s, image) in map.images.iter().enumerate() {
            let side = levels[upper].catalogue.side(s as u32);
            if !seen.insert(side) {
                continue;
            }
            let image = image.as_ref().unwrap();
            println!(
                "  side {side}: image clique of size {} = {} below + {} corner supers + {} enclosures + {} case",
                image.clique.len(),
                image.part_minus1.len(),
                image.part_plus1.len(),
                image.part_plus3.len(),
                image.part_case.len()
            );
        }
    }
}
