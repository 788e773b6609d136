//! Ordered diagrams and the Vershik successor on finite towers.
//!
//! Paths into the same vertex compare by their deepest differing edge, so
//! the successor is an odometer on edge labels: the lowest non-maximal
//! edge moves to its next label and everything below resets to the
//! minimal path.

mod machine;
mod ordering;

pub use machine::{CodingSymbol, FinitePath, OrderedDiagram, Tower, MAX_INDEGREE};
pub use ordering::{
    parse_ordering, parse_ordering_json, ExplicitLabel, InEdge, OrderingJson, OrderingSpec,
};

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;

    use super::*;
    use crate::diagram::Diagram;
    use crate::error::Error;
    use crate::polynomial::PolynomialSpec;
    use crate::vertex::Vertex;

    fn v(level: u32, c: &[u32]) -> Vertex {
        Vertex::new(level, c.to_vec())
    }

    fn pascal(levels: u32, ordering: OrderingSpec) -> OrderedDiagram {
        let d = Diagram::polynomial(PolynomialSpec::linear(2).unwrap(), levels).unwrap();
        OrderedDiagram::new(d, ordering).unwrap()
    }

    #[test]
    fn minimal_and_maximal_paths() {
        let od = pascal(4, OrderingSpec::SourceLex);
        let min = od.minimal_path(&v(3, &[2, 1])).unwrap();
        let trace: Vec<Vec<u32>> = od.vertices(&min).unwrap().into_iter().map(|v| v.coords).collect();
        assert_eq!(trace, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![2, 1]]);
        let max = od.maximal_path(&v(3, &[2, 1])).unwrap();
        let trace: Vec<Vec<u32>> = od.vertices(&max).unwrap().into_iter().map(|v| v.coords).collect();
        assert_eq!(trace, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 1]]);
        assert!(od.minimal_path(&Vertex::root(2)).unwrap().is_empty());
    }

    #[test]
    fn successor_in_small_tower() {
        let od = pascal(3, OrderingSpec::SourceLex);
        let x = od.minimal_path(&v(2, &[1, 1])).unwrap();
        assert_eq!(od.vertices(&x).unwrap()[1], v(1, &[0, 1]));
        let y = od.successor(&x).unwrap();
        assert_eq!(od.vertices(&y).unwrap()[1], v(1, &[1, 0]));
        assert_eq!(od.successor(&y), Err(Error::MaximalAtHorizon));
        assert_eq!(od.predecessor(&x), Err(Error::MinimalAtHorizon));
    }

    #[test]
    fn predecessor_inverts_successor() {
        let od = pascal(4, OrderingSpec::SourceLex);
        let tower = od.tower(&v(4, &[2, 2]), 100).unwrap();
        assert_eq!(tower.paths.len(), 6);
        for (r, pair) in tower.paths.windows(2).enumerate() {
            assert_eq!(od.predecessor(&pair[1]).unwrap(), pair[0]);
            assert_eq!(od.rank(&pair[0]).unwrap(), BigUint::from(r));
        }
        for (r, x) in tower.paths.iter().enumerate() {
            assert_eq!(&od.unrank(&tower.vertex, &BigUint::from(r)).unwrap(), x);
        }
        assert_eq!(tower.paths.last(), Some(&od.maximal_path(&tower.vertex).unwrap()));
        assert!(matches!(
            od.unrank(&tower.vertex, &BigUint::from(6u32)),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn tower_budget() {
        let od = pascal(6, OrderingSpec::SourceLex);
        assert!(matches!(
            od.tower(&v(6, &[3, 3]), 19),
            Err(Error::TowerTooLarge { .. })
        ));
        assert_eq!(od.tower(&v(6, &[3, 3]), 20).unwrap().paths.len(), 20);
    }

    #[test]
    fn edges_round_trip() {
        let od = pascal(5, OrderingSpec::Random { seed: 11 });
        for x in od.tower(&v(5, &[3, 2]), 100).unwrap().paths {
            let edges = od.edges(&x).unwrap();
            assert_eq!(edges.len(), 5);
            assert_eq!(od.path_from_edges(&edges).unwrap(), x);
        }
    }

    #[test]
    fn coding_symbols() {
        let od = pascal(3, OrderingSpec::SourceLex);
        let tower = od.tower(&v(2, &[1, 1]), 10).unwrap();
        let (a, b) = (&tower.paths[0], &tower.paths[1]);
        assert_eq!(od.k_coding_symbol(a, 0).unwrap(), od.k_coding_symbol(b, 0).unwrap());
        assert_ne!(od.k_coding_symbol(a, 1).unwrap(), od.k_coding_symbol(b, 1).unwrap());
        let block = od.basic_block(&v(2, &[1, 1]), 1, 10).unwrap();
        assert_eq!(block[0].vertex, v(1, &[0, 1]));
        assert_eq!(block[1].vertex, v(1, &[1, 0]));
        assert!(od.k_coding_symbol(a, 3).is_err());
    }

    #[test]
    fn vertex_codings() {
        let od = pascal(3, OrderingSpec::SourceLex);
        let w = v(3, &[2, 1]);
        assert_eq!(od.vertex_coding(&w, 2, 100).unwrap(), vec![v(2, &[1, 1]), v(2, &[2, 0])]);
        assert_eq!(
            od.vertex_coding(&w, 1, 100).unwrap(),
            vec![v(1, &[0, 1]), v(1, &[1, 0]), v(1, &[1, 0])]
        );
        assert_eq!(od.vertex_coding(&v(1, &[1, 0]), 0, 100).unwrap(), vec![Vertex::root(2)]);
        assert!(od.vertex_coding(&w, 1, 2).is_err());
    }

    #[test]
    fn quartic_root_coding_repeats_by_coefficient() {
        let spec = crate::polynomial::parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap();
        let od = OrderedDiagram::new(Diagram::polynomial(spec, 1).unwrap(), OrderingSpec::SourceLex).unwrap();
        let c = od.vertex_coding(&v(1, &[1, 3]), 0, 100).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn random_is_deterministic() {
        let a = pascal(5, OrderingSpec::Random { seed: 7 });
        let b = pascal(5, OrderingSpec::Random { seed: 7 });
        for n in 1..=5 {
            for i in 0..a.diagram().level(n).len() {
                assert_eq!(a.incoming_at(n, i), b.incoming_at(n, i));
            }
        }
    }

    #[test]
    fn explicit_tables() {
        let ok = parse_ordering_json(
            r#"{"explicit": {"1,1": [{"source": [1,0], "label": 1}, {"source": [0,1], "label": 2}]}}"#,
        )
        .unwrap();
        let od = pascal(2, ok);
        let min = od.minimal_path(&v(2, &[1, 1])).unwrap();
        assert_eq!(od.vertices(&min).unwrap()[1], v(1, &[1, 0]));

        let dup = parse_ordering_json(
            r#"{"explicit": {"1,1": [{"source": [1,0], "label": 1}, {"source": [0,1], "label": 1}]}}"#,
        )
        .unwrap();
        let d = Diagram::polynomial(PolynomialSpec::linear(2).unwrap(), 2).unwrap();
        assert!(matches!(
            OrderedDiagram::new(d, dup),
            Err(Error::NonBijectiveLabeling { .. })
        ));
    }
}
