//! Finite incidence geometry: PG(2,q), A2 link graphs, and 2-complexes.

mod complex;
mod graph;
mod io;
mod plane;

pub use complex::{build_torus, parse_complex_spec, suspension, thicken, Complex2};
pub use graph::Graph;
pub use io::{complex_to_text, graph_to_text, parse_adjacency_text, AdjacencyDoc};
pub use plane::{build_projective_plane, incidence_graph, IncidenceGraph, ProjectivePlane};
