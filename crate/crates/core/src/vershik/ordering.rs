//! Edge orderings: a bijective labeling of the incoming edges of every
//! vertex.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How incoming edges are labeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingSpec {
    /// Sources in ascending lexicographic order, then by copy index.
    SourceLex,
    /// Sources in descending lexicographic (canonical) order, then by copy.
    SourceRevlex,
    /// A uniform shuffle per vertex from one ChaCha stream.
    Random { seed: u64 },
    /// Labels given per vertex; vertices not listed use `SourceLex`.
    Explicit(BTreeMap<Vec<u32>, Vec<ExplicitLabel>>),
}

impl OrderingSpec {
    pub fn preset(name: &str, seed: Option<u64>) -> Result<Self> {
        match name {
            "source-lex" => Ok(OrderingSpec::SourceLex),
            "source-revlex" => Ok(OrderingSpec::SourceRevlex),
            "random" => Ok(OrderingSpec::Random {
                seed: seed.unwrap_or(0),
            }),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderingSpec::SourceLex => "source-lex",
            OrderingSpec::SourceRevlex => "source-revlex",
            OrderingSpec::Random { .. } => "random",
            OrderingSpec::Explicit(_) => "explicit",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            OrderingSpec::Random { seed } => Some(*seed),
            _ => None,
        }
    }

    pub fn to_json(&self) -> OrderingJson {
        match self {
            OrderingSpec::Explicit(table) => OrderingJson {
                preset: None,
                seed: None,
                explicit: Some(
                    table
                        .iter()
                        .map(|(k, v)| (vertex_key(k), v.clone()))
                        .collect(),
                ),
            },
            other => OrderingJson {
                preset: Some(other.name().to_string()),
                seed: other.seed(),
                explicit: None,
            },
        }
    }
}

/// One labeled incoming edge in an explicit table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitLabel {
    pub source: Vec<u32>,
    #[serde(default = "one")]
    pub copy: u64,
    pub label: u64,
}

fn one() -> u64 {
    1
}

/// `{"preset": "...", "seed": n}` or `{"explicit": {"a,b": [{"source": [..], "copy": k, "label": l}]}}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<BTreeMap<String, Vec<ExplicitLabel>>>,
}

fn vertex_key(coords: &[u32]) -> String {
    coords
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_vertex_key(key: &str) -> Result<Vec<u32>> {
    key.trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|e| Error::Json(format!("bad vertex key {key:?}: {e}")))
        })
        .collect()
}

pub fn parse_ordering_json(input: &str) -> Result<OrderingSpec> {
    let json: OrderingJson = serde_json::from_str(input)?;
    match (json.preset, json.explicit) {
        (Some(_), Some(_)) => Err(Error::Json(
            "ordering has both \"preset\" and \"explicit\"".into(),
        )),
        (Some(name), None) => OrderingSpec::preset(&name, json.seed),
        (None, Some(table)) => {
            let mut out = BTreeMap::new();
            for (key, labels) in table {
                out.insert(parse_vertex_key(&key)?, labels);
            }
            Ok(OrderingSpec::Explicit(out))
        }
        (None, None) => Err(Error::Json(
            "ordering needs \"preset\" or \"explicit\"".into(),
        )),
    }
}

/// A preset name, or JSON when the text starts with `{`.
pub fn parse_ordering(input: &str, seed: Option<u64>) -> Result<OrderingSpec> {
    let trimmed = input.trim();
    if trimmed.starts_with('{') {
        parse_ordering_json(trimmed)
    } else {
        OrderingSpec::preset(trimmed, seed)
    }
}

/// One incoming edge: index of its source in the previous level and its
/// copy number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InEdge {
    pub source: usize,
    pub copy: u64,
}

pub(crate) struct Labeler {
    spec: OrderingSpec,
    rng: Option<ChaCha8Rng>,
}

impl Labeler {
    pub(crate) fn new(spec: &OrderingSpec) -> Self {
        let rng = spec.seed().map(ChaCha8Rng::seed_from_u64);
        Self {
            spec: spec.clone(),
            rng,
        }
    }

    /// Arranges the incoming edges of `target` in label order. `edges`
    /// arrives sorted by canonical source order, then copy.
    pub(crate) fn arrange(
        &mut self,
        target: &[u32],
        mut edges: Vec<InEdge>,
        source_coords: impl Fn(usize) -> Vec<u32>,
    ) -> Result<Vec<InEdge>> {
        match &self.spec {
            OrderingSpec::SourceRevlex => Ok(edges),
            OrderingSpec::SourceLex => Ok(source_lex(edges)),
            OrderingSpec::Random { .. } => {
                let rng = self.rng.as_mut().expect("random ordering carries a generator");
                edges.shuffle(rng);
                Ok(edges)
            }
            OrderingSpec::Explicit(table) => match table.get(target) {
                None => Ok(source_lex(edges)),
                Some(labels) => explicit(target, edges, labels, source_coords),
            },
        }
    }
}

fn source_lex(edges: Vec<InEdge>) -> Vec<InEdge> {
    // Canonical order is descending, so group by source and reverse the
    // groups while keeping copies ascending.
    let mut groups: Vec<Vec<InEdge>> = Vec::new();
    for e in edges {
        match groups.last_mut() {
            Some(g) if g[0].source == e.source => g.push(e),
            _ => groups.push(vec![e]),
        }
    }
    groups.into_iter().rev().flatten().collect()
}

fn explicit(
    target: &[u32],
    edges: Vec<InEdge>,
    labels: &[ExplicitLabel],
    source_coords: impl Fn(usize) -> Vec<u32>,
) -> Result<Vec<InEdge>> {
    let bad = || Error::NonBijectiveLabeling {
        vertex: target.to_vec(),
        indegree: edges.len(),
    };
    if labels.len() != edges.len() {
        return Err(bad());
    }
    let mut slots: Vec<Option<InEdge>> = vec![None; edges.len()];
    for l in labels {
        let edge = edges
            .iter()
            .find(|e| e.copy == l.copy && source_coords(e.source) == l.source)
            .ok_or_else(bad)?;
        if l.label == 0 || l.label > edges.len() as u64 {
            return Err(bad());
        }
        let slot = &mut slots[(l.label - 1) as usize];
        if slot.is_some() {
            return Err(bad());
        }
        *slot = Some(*edge);
    }
    let arranged: Vec<InEdge> = slots.into_iter().collect::<Option<_>>().ok_or_else(bad)?;
    let mut seen = arranged.clone();
    seen.sort_by_key(|e| (e.source, e.copy));
    seen.dedup();
    if seen.len() != arranged.len() {
        return Err(bad());
    }
    Ok(arranged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ordering("source-lex", None).unwrap(), OrderingSpec::SourceLex);
        assert_eq!(
            parse_ordering(r#"{"preset": "random", "seed": 7}"#, None).unwrap(),
            OrderingSpec::Random { seed: 7 }
        );
        let e = parse_ordering(
            r#"{"explicit": {"1,1": [{"source": [1,0], "label": 1}, {"source": [0,1], "label": 2}]}}"#,
            None,
        )
        .unwrap();
        match e {
            OrderingSpec::Explicit(t) => assert_eq!(t[&vec![1, 1]].len(), 2),
            _ => panic!("expected explicit table"),
        }
        assert!(matches!(parse_ordering("zigzag", None), Err(Error::UnknownPreset(_))));
        assert!(parse_ordering(r#"{"preset": "source-lex", "explicit": {}}"#, None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = OrderingSpec::Random { seed: 3 };
        let text = serde_json::to_string(&spec.to_json()).unwrap();
        assert_eq!(text, r#"{"preset":"random","seed":3}"#);
        assert_eq!(parse_ordering_json(&text).unwrap(), spec);
    }

    #[test]
    fn source_lex_reverses_sources_keeps_copies() {
        let edges = vec![
            InEdge { source: 0, copy: 1 },
            InEdge { source: 0, copy: 2 },
            InEdge { source: 1, copy: 1 },
        ];
        let out = source_lex(edges);
        assert_eq!(
            out,
            vec![
                InEdge { source: 1, copy: 1 },
                InEdge { source: 0, copy: 1 },
                InEdge { source: 0, copy: 2 }
            ]
        );
    }
}
