//! Combinatorial machinery for clique graph dynamics on locally cyclic graphs.
//!
//! The crate is organised around a handful of interlocking pieces:
//!
//! * [`graph`]: finite simple graphs with sorted adjacency, BFS distances,
//!   and the locally-cyclic / closed-surface predicates.
//! * [`hexgeo`]: the hexagonal lattice coordinate model: triangular-shaped
//!   templates `Δ_m`, their boundaries and erosions, plus finite host
//!   generators (lattice windows, 6-regular tori, cone lattices).
//! * [`cliques`]: maximal clique enumeration, the clique graph operator `k`
//!   and its iterates, and the structures induced on clique graphs by group
//!   actions and covering maps.
//! * [`trishapes`]: enumeration of triangular-shaped subgraphs of a host,
//!   the geometric clique graph `G_n` with its typed adjacencies, the
//!   degree-26 census and the divergence invariant `D`.
//! * [`covers`]: elementary-move walk homotopy, triangular covering maps
//!   with unique lifting, bounded universal-cover development, quotients by
//!   group actions and Galois checks.
//! * [`iso`]: graph isomorphism with witnesses, equivariant isomorphism,
//!   the explicit level map `C_{n+1}` and the torus structure oracle.
//! * [`cli`]: a batch front end turning all of the above into reproducible
//!   JSON/CSV experiments.
//!
//! The `examples/` directory contains one runnable walkthrough per major
//! capability; start with `cargo run --example clique_iteration`.

pub mod cli;
pub mod cliques;
pub mod covers;
pub mod graph;
pub mod hexgeo;
pub mod iso;
pub mod naive;
pub mod trishapes;

pub use graph::{Graph, VertexId, Walk};
