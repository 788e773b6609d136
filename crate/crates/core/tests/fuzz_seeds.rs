//! Replays the checked-in fuzz corpus through the same parser entry points.

use std::fs;
use std::path::PathBuf;

use polyshape_core::diagram::parse_multiplicity_table;
use polyshape_core::measure::parse_weights_json;
use polyshape_core::polynomial::{parse_polynomial_json, parse_polynomial_text};
use polyshape_core::vershik::{parse_ordering_json, OrderedDiagram};
use polyshape_core::{parse_polynomial, Diagram, Multiplicity, PolynomialSpec};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn outcomes<T, E>(target: &str, f: impl Fn(&str) -> Result<T, E>) -> Vec<(String, bool)> {
    seeds(target).into_iter().map(|(name, s)| (name, f(&s).is_ok())).collect()
}

fn ok(name: &str, good: bool) -> (String, bool) {
    (name.to_string(), good)
}

#[test]
fn polynomial_text_seeds() {
    for (_, s) in seeds("parse_polynomial_text") {
        if let Ok(spec) = parse_polynomial_text(&s) {
            assert_eq!(parse_polynomial_text(&spec.to_string()).unwrap(), spec);
        }
    }
    let got = outcomes("parse_polynomial_text", parse_polynomial_text);
    assert_eq!(
        got,
        vec![ok("mixed_degree", false), ok("pascal", true), ok("quartic", true), ok("stars", true), ok("ternary", true)]
    );
}

#[test]
fn polynomial_json_seeds() {
    let got = outcomes("parse_polynomial_json", parse_polynomial_json);
    assert_eq!(got, vec![ok("pascal", true), ok("quartic", true), ok("zero_coef", false)]);
}

#[test]
fn ordering_seeds() {
    let d = Diagram::polynomial(PolynomialSpec::linear(2).unwrap(), 3).unwrap();
    let got = outcomes("parse_ordering_json", |s| {
        parse_ordering_json(s).and_then(|o| OrderedDiagram::new(d.clone(), o))
    });
    assert_eq!(
        got,
        vec![ok("duplicate_label", false), ok("explicit", true), ok("random", true), ok("source_lex", true)]
    );
}

#[test]
fn weight_seeds() {
    let spec = parse_polynomial("x1^2 + 2 x1 x2 + x2^2").unwrap();
    let got = outcomes("parse_weights_json", |s| parse_weights_json(&spec, s));
    assert_eq!(got, vec![ok("half", true), ok("off_surface", false), ok("symmetric", true)]);
}

#[test]
fn multiplicity_seeds() {
    let spec = PolynomialSpec::linear(2).unwrap();
    let got = outcomes("parse_multiplicity_table", |s| {
        parse_multiplicity_table(&spec, s).and_then(|t| Diagram::new(spec.clone(), Multiplicity::Table(t), 4))
    });
    assert_eq!(got, vec![ok("empty", true), ok("not_an_edge", false), ok("override", true)]);
}
