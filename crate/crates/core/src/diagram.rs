//! Source sets, edge multiplicities, path-count dimensions and the
//! connectedness witness.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::PolynomialSpec;
use crate::vertex::Vertex;

/// One edge between consecutive levels. `copy` is in `1..=multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub source: Vertex,
    pub target: Vertex,
    pub copy: u64,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    source: Vec<u32>,
    target: Vec<u32>,
    copy: u64,
}

impl Serialize for EdgeRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EdgeJson {
            source: self.source.coords.clone(),
            target: self.target.coords.clone(),
            copy: self.copy,
        }
        .serialize(s)
    }
}

impl PolynomialSpec {
    /// `S(w)`: the previous-level vertices `u` with `w - u` a source vector,
    /// in canonical order. Empty for the root.
    pub fn source_set(&self, w: &Vertex) -> Vec<Vertex> {
        if w.level == 0 {
            return Vec::new();
        }
        // Source vectors are in descending lex order, so `w - s` comes out
        // ascending; reverse for canonical order.
        let mut out: Vec<Vertex> = self
            .source_vectors()
            .iter()
            .filter_map(|s| {
                let coords: Option<Vec<u32>> = w
                    .coords
                    .iter()
                    .zip(s)
                    .map(|(&a, &b)| a.checked_sub(b))
                    .collect();
                coords.map(|c| Vertex::new(w.level - 1, c))
            })
            .collect();
        out.reverse();
        out
    }

    /// Next-level vertices having `u` in their source set, in canonical order.
    pub fn targets(&self, u: &Vertex) -> Vec<Vertex> {
        self.source_vectors().iter().map(|s| u.plus(s)).collect()
    }

    /// `w - u` when `u` is one level above `w` and the difference is a
    /// source vector.
    pub fn source_vector_between(&self, u: &Vertex, w: &Vertex) -> Option<Vec<u32>> {
        if w.level != u.level + 1 || u.arity() != w.arity() {
            return None;
        }
        let s = w.difference(u)?;
        (s.iter().map(|&c| u64::from(c)).sum::<u64>() == u64::from(self.degree())).then_some(s)
    }

    /// Distinguished source vertex `w - d e_j`, present iff `w(j) >= d`.
    pub fn dsv(&self, w: &Vertex, j: usize) -> Option<Vertex> {
        if w.level == 0 || w.coords[j] < self.degree() {
            return None;
        }
        let mut coords = w.coords.clone();
        coords[j] -= self.degree();
        Some(Vertex::new(w.level - 1, coords))
    }

    /// A common descendant of two same-level vertices together with
    /// downward witness paths from each of them.
    ///
    /// The meeting vertex is the coordinate-wise maximum, padded on the
    /// first coordinate up to a multiple of `d`.
    pub fn connect(&self, v1: &Vertex, v2: &Vertex) -> Result<Connection> {
        self.check_vertex(v1)?;
        self.check_vertex(v2)?;
        if v1.level != v2.level {
            return Err(Error::PreconditionNotMet(format!(
                "connect needs same-level vertices, got levels {} and {}",
                v1.level, v2.level
            )));
        }
        if v1 == v2 {
            return Ok(Connection {
                meet: v1.clone(),
                from_first: Vec::new(),
                from_second: Vec::new(),
            });
        }
        let d = u64::from(self.degree());
        let mut coords: Vec<u32> = v1
            .coords
            .iter()
            .zip(&v2.coords)
            .map(|(&a, &b)| a.max(b))
            .collect();
        let total: u64 = coords.iter().map(|&c| u64::from(c)).sum();
        let pad = (d - total % d) % d;
        coords[0] += pad as u32;
        let meet = Vertex::new(((total + pad) / d) as u32, coords);
        Ok(Connection {
            from_first: self.greedy_descent(v1, &meet),
            from_second: self.greedy_descent(v2, &meet),
            meet,
        })
    }

    /// Walks from `from` down to `to` by repeatedly removing `d` units of
    /// the remaining difference, filling from the first coordinate.
    fn greedy_descent(&self, from: &Vertex, to: &Vertex) -> Vec<EdgeRef> {
        let mut remaining: Vec<u32> = to
            .difference(from)
            .expect("meeting vertex dominates both endpoints");
        let mut current = from.clone();
        let mut edges = Vec::with_capacity((to.level - from.level) as usize);
        while current.level < to.level {
            let mut budget = self.degree();
            let mut s = vec![0u32; remaining.len()];
            for (slot, rem) in s.iter_mut().zip(remaining.iter_mut()) {
                let take = (*rem).min(budget);
                *slot = take;
                *rem -= take;
                budget -= take;
            }
            debug_assert_eq!(budget, 0);
            let next = current.plus(&s);
            edges.push(EdgeRef {
                source: current,
                target: next.clone(),
                copy: 1,
            });
            current = next;
        }
        edges
    }
}

/// Result of [`PolynomialSpec::connect`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connection {
    pub meet: Vertex,
    pub from_first: Vec<EdgeRef>,
    pub from_second: Vec<EdgeRef>,
}

/// How many parallel edges join `u` to `w` when `w - u` is a source vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Multiplicity {
    /// The polynomial diagram: the coefficient of `w - u`.
    #[default]
    Coefficients,
    /// One edge between every connected pair.
    AllOnes,
    /// Explicit per-pair overrides on top of a base preset.
    Table(MultiplicityTable),
}

impl Multiplicity {
    pub fn name(&self) -> &'static str {
        match self {
            Multiplicity::Coefficients => "coefficients",
            Multiplicity::AllOnes => "all-ones",
            Multiplicity::Table(_) => "table",
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, Multiplicity::Coefficients)
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "coefficients" => Some(Multiplicity::Coefficients),
            "all-ones" => Some(Multiplicity::AllOnes),
            _ => None,
        }
    }
}

/// Per-pair multiplicity overrides. Pairs without an entry fall back to
/// the base preset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub all_ones_base: bool,
    pub entries: BTreeMap<(Vec<u32>, Vec<u32>), u64>,
}

/// JSON form of a multiplicity table:
/// `{"base": "coefficients"|"all-ones", "entries": [{"source": [..], "target": [..], "multiplicity": k}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityTableJson {
    #[serde(default = "default_base")]
    pub base: String,
    #[serde(default)]
    pub entries: Vec<MultiplicityEntryJson>,
}

fn default_base() -> String {
    "coefficients".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiplicityEntryJson {
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub multiplicity: i64,
}

/// Parses a multiplicity table and checks every entry against the shape of
/// `spec`.
pub fn parse_multiplicity_table(spec: &PolynomialSpec, input: &str) -> Result<MultiplicityTable> {
    let json: MultiplicityTableJson = serde_json::from_str(input)?;
    let all_ones_base = match json.base.as_str() {
        "coefficients" => false,
        "all-ones" => true,
        other => return Err(Error::InvalidMultiplicity(format!("unknown base {other:?}"))),
    };
    let mut entries = BTreeMap::new();
    for e in json.entries {
        if e.multiplicity < 1 {
            return Err(Error::InvalidMultiplicity(format!(
                "multiplicity {} between {:?} and {:?} must be positive",
                e.multiplicity, e.source, e.target
            )));
        }
        let u = spec.vertex(e.source.clone())?;
        let w = spec.vertex(e.target.clone())?;
        if spec.source_vector_between(&u, &w).is_none() {
            return Err(Error::InvalidMultiplicity(format!(
                "{:?} -> {:?} is not an edge of the diagram",
                e.source, e.target
            )));
        }
        entries.insert((e.source, e.target), e.multiplicity as u64);
    }
    Ok(MultiplicityTable {
        all_ones_base,
        entries,
    })
}

/// A polynomial-shape diagram materialized up to a horizon level.
#[derive(Debug, Clone)]
pub struct Diagram {
    spec: PolynomialSpec,
    multiplicity: Multiplicity,
    max_level: u32,
    levels: Vec<Vec<Vertex>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    dims: Vec<Vec<BigUint>>,
}

impl Diagram {
    pub fn new(spec: PolynomialSpec, multiplicity: Multiplicity, max_level: u32) -> Result<Self> {
        let mut levels = Vec::with_capacity(max_level as usize + 1);
        let mut index = Vec::with_capacity(max_level as usize + 1);
        for n in 0..=max_level {
            let vs = spec.enumerate_vertices(n);
            index.push(
                vs.iter()
                    .enumerate()
                    .map(|(i, v)| (v.coords.clone(), i))
                    .collect::<HashMap<_, _>>(),
            );
            levels.push(vs);
        }
        let mut diagram = Self {
            spec,
            multiplicity,
            max_level,
            levels,
            index,
            dims: Vec::new(),
        };
        diagram.dims = diagram.compute_dimensions();
        Ok(diagram)
    }

    /// The polynomial diagram (multiplicities are coefficients).
    pub fn polynomial(spec: PolynomialSpec, max_level: u32) -> Result<Self> {
        Self::new(spec, Multiplicity::Coefficients, max_level)
    }

    fn compute_dimensions(&self) -> Vec<Vec<BigUint>> {
        let mut dims: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
        for n in 1..=self.max_level as usize {
            let prev = &dims[n - 1];
            let row = self.levels[n]
                .iter()
                .map(|w| {
                    let mut acc = BigUint::zero();
                    for u in self.spec.source_set(w) {
                        let m = self.edge_multiplicity(&u, w);
                        acc += &prev[self.index[n - 1][&u.coords]] * m;
                    }
                    acc
                })
                .collect();
            dims.push(row);
        }
        dims
    }

    pub fn spec(&self) -> &PolynomialSpec {
        &self.spec
    }

    pub fn multiplicity_mode(&self) -> &Multiplicity {
        &self.multiplicity
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn arity(&self) -> usize {
        self.spec.arity()
    }

    pub fn degree(&self) -> u32 {
        self.spec.degree()
    }

    /// Vertices of a level in canonical order.
    pub fn level(&self, n: u32) -> &[Vertex] {
        &self.levels[n as usize]
    }

    pub fn vertex_at(&self, level: u32, idx: usize) -> &Vertex {
        &self.levels[level as usize][idx]
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v.level as usize)?.get(&v.coords).copied()
    }

    /// Position of `v` in its level, or an error if it is not a vertex
    /// within the horizon.
    pub fn locate(&self, v: &Vertex) -> Result<usize> {
        if v.level > self.max_level {
            return Err(Error::BeyondHorizon {
                level: v.level,
                max_level: self.max_level,
            });
        }
        self.index_of(v).ok_or_else(|| Error::InvalidVertex {
            level: v.level,
            coords: v.coords.clone(),
        })
    }

    /// Number of parallel edges from `u` to `w`; zero when they are not
    /// adjacent.
    pub fn edge_multiplicity(&self, u: &Vertex, w: &Vertex) -> u64 {
        let Some(s) = self.spec.source_vector_between(u, w) else {
            return 0;
        };
        match &self.multiplicity {
            Multiplicity::Coefficients => self.spec.coefficient(&s).unwrap_or(0),
            Multiplicity::AllOnes => 1,
            Multiplicity::Table(table) => {
                if let Some(&m) = table.entries.get(&(u.coords.clone(), w.coords.clone())) {
                    m
                } else if table.all_ones_base {
                    1
                } else {
                    self.spec.coefficient(&s).unwrap_or(0)
                }
            }
        }
    }

    /// Number of incoming edges of `w`.
    pub fn indegree(&self, w: &Vertex) -> u64 {
        self.spec
            .source_set(w)
            .iter()
            .map(|u| self.edge_multiplicity(u, w))
            .sum()
    }

    /// Number of root-to-`v` paths.
    pub fn dimension(&self, v: &Vertex) -> Result<&BigUint> {
        let idx = self.locate(v)?;
        Ok(&self.dims[v.level as usize][idx])
    }

    pub fn dimension_at(&self, level: u32, idx: usize) -> &BigUint {
        &self.dims[level as usize][idx]
    }
}
