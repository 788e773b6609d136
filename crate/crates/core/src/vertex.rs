//! Vertices of the lattice: level-`n` vertices are the compositions of
//! `n * d` into `q` nonnegative parts.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::PolynomialSpec;

/// A vertex: a level together with its exponent vector.
///
/// Ordering is canonical: by level, then by coordinates in descending
/// lexicographic order, so `(12,0)` sorts before `(0,12)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub level: u32,
    pub coords: Vec<u32>,
}

impl Vertex {
    pub fn new(level: u32, coords: Vec<u32>) -> Self {
        Self { level, coords }
    }

    pub fn root(arity: usize) -> Self {
        Self::new(0, vec![0; arity])
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, j: usize) -> u32 {
        self.coords[j]
    }

    pub fn total(&self) -> u64 {
        self.coords.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn min_coord(&self) -> u32 {
        self.coords.iter().copied().min().unwrap_or(0)
    }

    pub fn max_coord(&self) -> u32 {
        self.coords.iter().copied().max().unwrap_or(0)
    }

    /// A corner vertex has at most one nonzero coordinate (`n d e_j`).
    pub fn is_corner(&self) -> bool {
        self.coords.iter().filter(|&&c| c > 0).count() <= 1
    }

    /// `self - other` as a source vector, if it is nonnegative.
    pub fn difference(&self, other: &Vertex) -> Option<Vec<u32>> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect()
    }

    pub fn plus(&self, s: &[u32]) -> Vertex {
        Vertex::new(
            self.level + 1,
            self.coords.iter().zip(s).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| other.coords.cmp(&self.coords))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Iterator over the compositions of `total` into `parts` nonnegative
/// parts, in descending lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

pub fn compositions(total: u32, parts: usize) -> Compositions {
    let current = (parts > 0).then(|| {
        let mut v = vec![0; parts];
        v[0] = total;
        v
    });
    Compositions { current }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let parts = out.len();
        // Rightmost position before the last one that can give a unit away.
        if let Some(i) = (0..parts.saturating_sub(1)).rev().find(|&i| out[i] > 0) {
            let mut next = out.clone();
            let tail: u32 = next[i + 1..].iter().sum();
            next[i] -= 1;
            next[i + 1..].iter_mut().for_each(|c| *c = 0);
            next[i + 1] = tail + 1;
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

impl PolynomialSpec {
    /// `|V_n| = C(n d + q - 1, q - 1)`.
    pub fn vertex_count(&self, level: u32) -> BigUint {
        let q = self.arity() as u64;
        binomial(u64::from(level) * u64::from(self.degree()) + q - 1, q - 1)
    }

    /// All vertices of a level, in canonical order.
    pub fn enumerate_vertices(&self, level: u32) -> Vec<Vertex> {
        compositions(level * self.degree(), self.arity())
            .map(|c| Vertex::new(level, c))
            .collect()
    }

    pub fn is_vertex(&self, v: &Vertex) -> bool {
        v.arity() == self.arity() && v.total() == u64::from(v.level) * u64::from(self.degree())
    }

    pub fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if self.is_vertex(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                level: v.level,
                coords: v.coords.clone(),
            })
        }
    }

    /// Builds a vertex from coordinates alone, inferring the level.
    pub fn vertex(&self, coords: Vec<u32>) -> Result<Vertex> {
        let total: u64 = coords.iter().map(|&c| u64::from(c)).sum();
        let d = u64::from(self.degree());
        if coords.len() != self.arity() || !total.is_multiple_of(d) {
            return Err(Error::InvalidVertex {
                level: (total / d) as u32,
                coords,
            });
        }
        Ok(Vertex::new((total / d) as u32, coords))
    }

    pub fn check_direction(&self, j: usize) -> Result<()> {
        if j < self.arity() {
            Ok(())
        } else {
            Err(Error::InvalidDirection(j))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    #[test]
    fn compositions_are_descending_lex() {
        let all: Vec<_> = compositions(2, 3).collect();
        assert_eq!(
            all,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert_eq!(compositions(0, 3).collect::<Vec<_>>(), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(5, 1).collect::<Vec<_>>(), vec![vec![5]]);
    }

    #[test]
    fn vertex_counts() {
        let pascal = PolynomialSpec::linear(2).unwrap();
        for n in 0..10 {
            assert_eq!(pascal.vertex_count(n), BigUint::from(n + 1));
        }
        let quartic = parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap();
        assert_eq!(quartic.vertex_count(3), BigUint::from(13u32));
        // Compositions of 4 into 3 parts, counted by hand: 15.
        let q3 = PolynomialSpec::all_ones(3, 2).unwrap();
        assert_eq!(q3.vertex_count(2), BigUint::from(15u32));
        assert_eq!(q3.enumerate_vertices(2).len(), 15);
    }

    #[test]
    fn enumeration_examples() {
        let quartic = parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap();
        let level1: Vec<_> = quartic
            .enumerate_vertices(1)
            .into_iter()
            .map(|v| v.coords)
            .collect();
        assert_eq!(
            level1,
            vec![vec![4, 0], vec![3, 1], vec![2, 2], vec![1, 3], vec![0, 4]]
        );
        assert_eq!(quartic.enumerate_vertices(0), vec![Vertex::root(2)]);
        let q3 = PolynomialSpec::linear(3).unwrap();
        let units: Vec<_> = q3.enumerate_vertices(1).into_iter().map(|v| v.coords).collect();
        assert_eq!(units, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn canonical_order_matches_sort() {
        let q3 = PolynomialSpec::all_ones(3, 2).unwrap();
        let vs = q3.enumerate_vertices(3);
        let mut sorted = vs.clone();
        sorted.sort();
        assert_eq!(vs, sorted);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::default());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }
}
