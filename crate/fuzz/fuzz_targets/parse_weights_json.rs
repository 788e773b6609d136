#![no_main]

use libfuzzer_sys::fuzz_target;
use polyshape_core::measure::parse_weights_json;
use polyshape_core::parse_polynomial;

fuzz_target!(|data: &[u8]| {
    let spec = parse_polynomial("x1^2 + 2 x1 x2 + x2^2").unwrap();
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(w) = parse_weights_json(&spec, s) {
            assert!(w.residual.is_finite());
        }
    }
});
