#![no_main]

use libfuzzer_sys::fuzz_target;
use polyshape_core::polynomial::parse_polynomial_json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_polynomial_json(s) {
        let _ = spec.vertex_count(3);
        let _ = spec.enumerate_vertices(1);
    }
});
