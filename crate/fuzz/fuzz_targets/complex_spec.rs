//! Fuzz the torus:n / thick:n,t spec parser; accepted specs must build
//! complexes with the advertised counts.

#![no_main]

use libfuzzer_sys::fuzz_target;
use perfora::geometry::parse_complex_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(complex) = parse_complex_spec(src) {
        let n = complex.vertex_count();
        // both families are torus-based: V - E + F = 0 and every edge bounds
        assert_eq!(complex.edge_count(), 3 * n);
        assert!(complex.face_count() % (2 * n) == 0);
        assert!(complex.every_edge_in_a_face());
        assert!(complex.q_star_min() >= 1);
    }
});
