#![no_main]

use libfuzzer_sys::fuzz_target;
use polyshape_core::vershik::{parse_ordering_json, OrderedDiagram};
use polyshape_core::{Diagram, PolynomialSpec};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(ordering) = parse_ordering_json(s) {
            let d = Diagram::polynomial(PolynomialSpec::linear(2).unwrap(), 3).unwrap();
            // Bad tables are errors, never panics.
            let _ = OrderedDiagram::new(d, ordering);
        }
    }
});
