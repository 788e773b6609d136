#![no_main]

use libfuzzer_sys::fuzz_target;
use polyshape_core::diagram::parse_multiplicity_table;
use polyshape_core::{Diagram, Multiplicity, PolynomialSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let spec = PolynomialSpec::linear(2).unwrap();
    if let Ok(table) = parse_multiplicity_table(&spec, s) {
        let _ = Diagram::new(spec, Multiplicity::Table(table), 4);
    }
});
