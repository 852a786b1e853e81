//! The divergence invariant D: the largest distance from any shape to one
//! whose degree differs from 26. On level graphs of the lattice it is
//! squeezed between n/48 and n/6 + 1, which is what makes the level
//! sequence provably non-repeating.
//!
//!     cargo run --release --example divergence_invariant

use clique_dynamics::graph::VertexId;
use clique_dynamics::hexgeo::{hex_window, WindowSpec};
use clique_dynamics::trishapes::{deg26_census, geo_clique_graph, invariant_d};

fn main() {
    for n in [6u32, 12] {
        let window = hex_window(&WindowSpec { center: [0, 0, 0], radius: n + 12 });
        let gcg = geo_clique_graph(&window.graph, n);
        let mut census = deg26_census(&gcg, 10);

        // shapes of side above n - 6 cannot have a +6 neighbour at level n,
        // so they are certified not-26 wherever they sit in the window
        for s in 0..gcg.catalogue.len() as u32 {
            if gcg.catalogue.side(s) + 6 > n && !census.not26.contains(&s) {
                census.not26.push(s);
            }
        }
        census.not26.sort_unstable();

        let probes = gcg.classifiable(10);
        let inv = invariant_d(&gcg, &census, &probes);
        let mut histogram = std::collections::BTreeMap::new();
        for &(_, d) in &inv.per_probe {
            *histogram.entry(d.unwrap()).or_insert(0usize) += 1;
        }
        println!(
            "level {n}: {} probes, distance histogram {:?}, max {} (bound {})",
            probes.len(),
            histogram,
            inv.max.unwrap(),
            n / 6 + 1
        );
        let sample = probes[probes.len() / 2];
        println!(
            "  e.g. shape {sample} (side {}, degree {}) sits {} steps from the not-26 set",
            gcg.catalogue.side(sample),
            gcg.graph.degree(VertexId(sample)),
            inv.per_probe.iter().find(|&&(p, _)| p == sample).unwrap().1.unwrap()
        );
    }
}
