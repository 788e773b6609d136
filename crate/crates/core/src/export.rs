//! DOT drawings and schema-versioned JSON documents.

use std::fmt::Write as _;

use serde::Serialize;

use crate::diagram::{Diagram, Multiplicity};
use crate::error::{Error, Result};
use crate::vershik::{OrderedDiagram, OrderingJson};

pub const SCHEMA: &str = "polyshape/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeStyle {
    /// One arrow per connected pair, labeled with its multiplicity.
    #[default]
    Multiplicity,
    /// One arrow per edge copy.
    Parallel,
}

/// DOT text for levels `0..=max_level`. With an ordering and the
/// `Parallel` style, each arrow carries its edge label.
pub fn export_dot(diagram: &Diagram, max_level: u32, style: EdgeStyle, ordered: Option<&OrderedDiagram>) -> Result<String> {
    if max_level > diagram.max_level() {
        return Err(Error::BeyondHorizon {
            level: max_level,
            max_level: diagram.max_level(),
        });
    }
    let node = |n: u32, i: usize| format!("n{n}_{i}");
    let mut out = String::from("digraph polyshape {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n");
    for n in 0..=max_level {
        let _ = write!(out, "  {{ rank=same;");
        for (i, v) in diagram.level(n).iter().enumerate() {
            let _ = write!(out, " {} [label=\"{}\"];", node(n, i), v);
        }
        out.push_str(" }\n");
    }
    for n in 1..=max_level {
        for (wi, w) in diagram.level(n).iter().enumerate() {
            match (style, ordered) {
                (EdgeStyle::Parallel, Some(od)) => {
                    for (l, e) in od.incoming_at(n, wi).iter().enumerate() {
                        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", node(n - 1, e.source), node(n, wi), l + 1);
                    }
                }
                (EdgeStyle::Parallel, None) => {
                    for u in diagram.spec().source_set(w) {
                        let ui = diagram.index_of(&u).expect("source within horizon");
                        for _ in 0..diagram.edge_multiplicity(&u, w) {
                            let _ = writeln!(out, "  {} -> {};", node(n - 1, ui), node(n, wi));
                        }
                    }
                }
                (EdgeStyle::Multiplicity, _) => {
                    for u in diagram.spec().source_set(w) {
                        let ui = diagram.index_of(&u).expect("source within horizon");
                        let m = diagram.edge_multiplicity(&u, w);
                        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", node(n - 1, ui), node(n, wi), m);
                    }
                }
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Where a report came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub polynomial: String,
    pub multiplicity: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<OrderingJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(diagram_spec: &crate::polynomial::PolynomialSpec, mode: &Multiplicity) -> Self {
        Self {
            tool: "polyshape",
            version: env!("CARGO_PKG_VERSION"),
            polynomial: diagram_spec.to_string(),
            multiplicity: mode.name(),
            ordering: None,
            seed: None,
        }
    }

    pub fn with_ordering(mut self, od: &OrderedDiagram) -> Self {
        self.seed = od.ordering().seed();
        self.ordering = Some(od.ordering().to_json());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Document<T: Serialize> {
    pub schema: &'static str,
    pub scope: &'static str,
    pub provenance: Provenance,
    pub body: T,
}

impl<T: Serialize> Document<T> {
    pub fn new(scope: &'static str, provenance: Provenance, body: T) -> Self {
        Self {
            schema: SCHEMA,
            scope,
            provenance,
            body,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramBody {
    pub max_level: u32,
    pub levels: Vec<LevelBody>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelBody {
    pub level: u32,
    pub vertices: Vec<VertexBody>,
    pub edges: Vec<EdgeBody>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexBody {
    pub coords: Vec<u32>,
    /// Decimal string; path counts outgrow JSON numbers.
    pub dimension: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeBody {
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub multiplicity: u64,
}

pub fn diagram_body(diagram: &Diagram, max_level: u32) -> Result<DiagramBody> {
    if max_level > diagram.max_level() {
        return Err(Error::BeyondHorizon {
            level: max_level,
            max_level: diagram.max_level(),
        });
    }
    let levels = (0..=max_level)
        .map(|n| {
            let vertices = diagram
                .level(n)
                .iter()
                .enumerate()
                .map(|(i, v)| VertexBody {
                    coords: v.coords.clone(),
                    dimension: diagram.dimension_at(n, i).to_string(),
                })
                .collect();
            let edges = if n == 0 {
                Vec::new()
            } else {
                diagram
                    .level(n)
                    .iter()
                    .flat_map(|w| {
                        diagram.spec().source_set(w).into_iter().map(move |u| EdgeBody {
                            multiplicity: diagram.edge_multiplicity(&u, w),
                            source: u.coords,
                            target: w.coords.clone(),
                        })
                    })
                    .collect()
            };
            LevelBody {
                level: n,
                vertices,
                edges,
            }
        })
        .collect();
    Ok(DiagramBody { max_level, levels })
}
