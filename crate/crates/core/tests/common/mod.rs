//! Brute-force reference implementations, kept free of library internals.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use polyshape_core::vershik::OrderedDiagram;
use polyshape_core::{parse_polynomial, EdgeRef, PolynomialSpec, Vertex};

pub const QUARTIC: &str = "x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4";
pub const Q3D2: &str = "x1^2 + x1 x2 + x1 x3 + x2^2 + x2 x3 + x3^2";

pub fn pascal() -> PolynomialSpec {
    parse_polynomial("x1 + x2").unwrap()
}

pub fn quartic() -> PolynomialSpec {
    parse_polynomial(QUARTIC).unwrap()
}

pub fn q3d2() -> PolynomialSpec {
    parse_polynomial(Q3D2).unwrap()
}

pub fn all_specs() -> Vec<(&'static str, PolynomialSpec)> {
    vec![("pascal", pascal()), ("quartic", quartic()), ("q3d2", q3d2())]
}

/// Plain copy of a polynomial: arity, degree, exponent -> coefficient.
#[derive(Clone, Debug)]
pub struct Poly {
    pub q: usize,
    pub d: u32,
    pub terms: Vec<(Vec<u32>, u64)>,
}

impl Poly {
    pub fn of(spec: &PolynomialSpec) -> Self {
        let terms: Vec<(Vec<u32>, u64)> = spec.terms().map(|(e, c)| (e.to_vec(), c)).collect();
        Poly {
            q: spec.arity(),
            d: terms[0].0.iter().sum(),
            terms,
        }
    }

    pub fn coefficient(&self, s: &[u32]) -> u64 {
        self.terms.iter().find(|(e, _)| e == s).map_or(0, |t| t.1)
    }
}

/// All vectors of length `q` summing to `total`, descending lexicographic.
pub fn naive_vertices(q: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(q: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if q == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(q - 1, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(q, total, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn level_vertices(p: &Poly, n: u32) -> Vec<Vec<u32>> {
    naive_vertices(p.q, n * p.d)
}

pub fn binom(n: u64, k: u64) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * u128::from(n - i) / u128::from(i + 1);
    }
    r
}

/// Previous-level vertices `u` with `w - u` an exponent of `p`.
pub fn sources(p: &Poly, w: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = p
        .terms
        .iter()
        .filter(|(s, _)| s.iter().zip(w).all(|(a, b)| a <= b))
        .map(|(s, _)| w.iter().zip(s).map(|(a, b)| a - b).collect())
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn is_subset(a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Covered: some other vertex of the level has a superset of sources.
pub fn covered(p: &Poly, n: u32, w: &[u32]) -> bool {
    let sw = sources(p, w);
    level_vertices(p, n)
        .iter()
        .any(|o| o.as_slice() != w && is_subset(&sw, &sources(p, o)))
}

pub fn covered_level(p: &Poly, n: u32) -> HashMap<Vec<u32>, bool> {
    let all = level_vertices(p, n);
    let srcs: Vec<Vec<Vec<u32>>> = all.iter().map(|w| sources(p, w)).collect();
    all.iter()
        .enumerate()
        .map(|(i, w)| {
            let c = (0..all.len()).any(|k| k != i && is_subset(&srcs[i], &srcs[k]));
            (w.clone(), c)
        })
        .collect()
}

/// Path counts by recursion over incoming edges.
pub fn dims(p: &Poly, max_level: u32, all_ones: bool) -> Vec<HashMap<Vec<u32>, BigUint>> {
    let mut out = vec![HashMap::from([(vec![0; p.q], BigUint::one())])];
    for n in 1..=max_level {
        let prev = &out[n as usize - 1];
        let mut level = HashMap::new();
        for w in level_vertices(p, n) {
            let mut total = BigUint::zero();
            for (s, c) in &p.terms {
                if s.iter().zip(&w).all(|(a, b)| a <= b) {
                    let u: Vec<u32> = w.iter().zip(s).map(|(a, b)| a - b).collect();
                    let m = if all_ones { 1 } else { *c };
                    total += &prev[&u] * BigUint::from(m);
                }
            }
            level.insert(w, total);
        }
        out.push(level);
    }
    out
}

/// Coefficients of `p^n`, by repeated multiplication.
pub fn power_coefficients(p: &Poly, n: u32) -> BTreeMap<Vec<u32>, BigUint> {
    let mut acc = BTreeMap::from([(vec![0; p.q], BigUint::one())]);
    for _ in 0..n {
        let mut next: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (e, c) in &acc {
            for (s, k) in &p.terms {
                let sum: Vec<u32> = e.iter().zip(s).map(|(a, b)| a + b).collect();
                *next.entry(sum).or_default() += c * BigUint::from(*k);
            }
        }
        acc = next;
    }
    acc
}

/// Paths into `v` in adic order: the top edge is the most significant digit.
pub fn tower_oracle(od: &OrderedDiagram, v: &Vertex) -> Vec<Vec<EdgeRef>> {
    let mut memo: HashMap<Vertex, Vec<Vec<EdgeRef>>> = HashMap::new();
    tower_rec(od, v, &mut memo)
}

fn tower_rec(od: &OrderedDiagram, v: &Vertex, memo: &mut HashMap<Vertex, Vec<Vec<EdgeRef>>>) -> Vec<Vec<EdgeRef>> {
    if v.level == 0 {
        return vec![Vec::new()];
    }
    if let Some(t) = memo.get(v) {
        return t.clone();
    }
    let mut edges = od.labeled_edges(v).unwrap();
    edges.sort_by_key(|e| od.label_of(e).unwrap());
    let mut out = Vec::new();
    for e in edges {
        for mut below in tower_rec(od, &e.source, memo) {
            below.push(e.clone());
            out.push(below);
        }
    }
    memo.insert(v.clone(), out.clone());
    out
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct PairTally {
    pub candidates: u64,
    pub killed: u64,
    pub censored: u64,
    pub genuine: u64,
}

/// Every pair of horizon-level paths sharing their first `i` edges, walked
/// in lockstep through their towers in both directions.
pub fn probe_oracle(od: &OrderedDiagram, i: usize, horizon: u32) -> PairTally {
    let towers: Vec<Vec<Vec<EdgeRef>>> = od
        .diagram()
        .level(horizon)
        .iter()
        .map(|v| tower_oracle(od, v))
        .collect();
    let flat: Vec<(usize, usize)> = towers
        .iter()
        .enumerate()
        .flat_map(|(t, paths)| (0..paths.len()).map(move |r| (t, r)))
        .collect();
    let prefix = |t: usize, r: usize, k: usize| &towers[t][r][..k];
    let mut tally = PairTally::default();
    for a in 0..flat.len() {
        for b in a + 1..flat.len() {
            let ((ta, ra), (tb, rb)) = (flat[a], flat[b]);
            if prefix(ta, ra, i) != prefix(tb, rb, i) {
                continue;
            }
            tally.candidates += 1;
            let mut differs = prefix(ta, ra, i + 1) != prefix(tb, rb, i + 1);
            let mut mismatch = false;
            for sign in [1i64, -1] {
                let mut step = 1i64;
                loop {
                    let pa = ra as i64 + sign * step;
                    let pb = rb as i64 + sign * step;
                    if pa < 0 || pb < 0 || pa as usize >= towers[ta].len() || pb as usize >= towers[tb].len() {
                        break;
                    }
                    let (pa, pb) = (pa as usize, pb as usize);
                    if prefix(ta, pa, i) != prefix(tb, pb, i) {
                        mismatch = true;
                        break;
                    }
                    differs |= prefix(ta, pa, i + 1) != prefix(tb, pb, i + 1);
                    step += 1;
                }
            }
            if mismatch {
                tally.killed += 1;
            } else {
                tally.censored += 1;
                if differs {
                    tally.genuine += 1;
                }
            }
        }
    }
    tally
}

/// `theta^w` for a weight vector.
pub fn monomial(theta: &[f64], w: &[u32]) -> f64 {
    theta.iter().zip(w).map(|(t, &e)| t.powi(e as i32)).product()
}
