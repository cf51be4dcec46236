//! Fuzz the plain-text adjacency format: no panics on arbitrary input, and
//! accepted documents must survive a write -> parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use perfora::geometry::{complex_to_text, graph_to_text, parse_adjacency_text, AdjacencyDoc};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    match parse_adjacency_text(src) {
        Ok(AdjacencyDoc::Graph(g)) => {
            match parse_adjacency_text(&graph_to_text(&g)) {
                Ok(AdjacencyDoc::Graph(h)) => assert_eq!(g, h),
                other => panic!("graph round trip failed: {other:?}"),
            }
        }
        Ok(AdjacencyDoc::Complex(c)) => {
            match parse_adjacency_text(&complex_to_text(&c)) {
                Ok(AdjacencyDoc::Complex(d)) => {
                    assert_eq!(c.face_count(), d.face_count());
                    assert_eq!(c.edge_count(), d.edge_count());
                    assert_eq!(c.vertex_count(), d.vertex_count());
                }
                other => panic!("complex round trip failed: {other:?}"),
            }
        }
        Err(_) => {}
    }
});
