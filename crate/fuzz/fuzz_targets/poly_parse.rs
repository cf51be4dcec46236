//! Fuzz the polynomial parser over a handful of coefficient fields and check
//! that anything accepted survives a display -> parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use perfora::gf::GfParams;
use perfora::poly::parse_poly;

fuzz_target!(|data: &[u8]| {
    let Some((&field_byte, rest)) = data.split_first() else {
        return;
    };
    let q = [2u64, 3, 4, 5, 7, 9][field_byte as usize % 6];
    let Ok(src) = std::str::from_utf8(rest) else {
        return;
    };
    let field = GfParams::for_order(q).expect("supported order");
    if let Ok(poly) = parse_poly(src, &field) {
        let shown = poly.display(&field);
        let back = parse_poly(&shown, &field).expect("displayed polynomial reparses");
        assert_eq!(back, poly, "round trip through {shown:?}");
    }
});
