#![no_main]

use libfuzzer_sys::fuzz_target;
use polyshape_core::polynomial::parse_polynomial_text;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_polynomial_text(s) {
            // Printing and reparsing must give the same polynomial back.
            let again = parse_polynomial_text(&spec.to_string()).expect("display output parses");
            assert_eq!(again, spec);
        }
    }
});
