use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::ordering::{InEdge, Labeler, OrderingSpec};
use crate::diagram::{Diagram, EdgeRef};
use crate::error::{Error, Result};
use crate::vertex::Vertex;

/// Largest indegree materialized in an ordering table.
pub const MAX_INDEGREE: u64 = 1 << 20;

/// A root-to-vertex path stored as the edge label used at each level.
///
/// `labels[k]` is the label of the edge from level `k` to level `k + 1`;
/// with the terminal vertex this determines every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePath {
    pub terminal: Vertex,
    pub labels: Vec<u32>,
}

impl FinitePath {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// The first `k` edges of a path, as an element of `A_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CodingSymbol {
    #[serde(serialize_with = "crate::report::coords")]
    pub vertex: Vertex,
    pub labels: Vec<u32>,
}

/// All paths into a vertex, in order.
#[derive(Debug, Clone)]
pub struct Tower {
    pub vertex: Vertex,
    pub paths: Vec<FinitePath>,
}

/// A diagram together with an edge ordering.
#[derive(Debug, Clone)]
pub struct OrderedDiagram {
    diagram: Diagram,
    ordering: OrderingSpec,
    /// Incoming edges per vertex, position `l - 1` holding label `l`.
    incoming: Vec<Vec<Vec<InEdge>>>,
    /// `offsets[n][w][l]`: number of paths into `w` through edges with a
    /// label at most `l`.
    offsets: Vec<Vec<Vec<BigUint>>>,
}

impl OrderedDiagram {
    pub fn new(diagram: Diagram, ordering: OrderingSpec) -> Result<Self> {
        let mut labeler = Labeler::new(&ordering);
        let mut incoming = vec![vec![Vec::new()]];
        let mut offsets = vec![vec![vec![BigUint::zero()]]];
        for n in 1..=diagram.max_level() {
            let mut level_in = Vec::with_capacity(diagram.level(n).len());
            let mut level_off = Vec::with_capacity(diagram.level(n).len());
            for w in diagram.level(n) {
                let mut edges = Vec::new();
                for u in diagram.spec().source_set(w) {
                    let m = diagram.edge_multiplicity(&u, w);
                    if m > MAX_INDEGREE || edges.len() as u64 + m > MAX_INDEGREE {
                        return Err(Error::LimitExceeded {
                            what: "indegree",
                            limit: MAX_INDEGREE,
                        });
                    }
                    let source = diagram.index_of(&u).expect("source lies within the horizon");
                    edges.extend((1..=m).map(|copy| InEdge { source, copy }));
                }
                let arranged = labeler.arrange(&w.coords, edges, |i| {
                    diagram.vertex_at(n - 1, i).coords.clone()
                })?;
                let mut acc = BigUint::zero();
                let mut off = Vec::with_capacity(arranged.len() + 1);
                off.push(acc.clone());
                for e in &arranged {
                    acc += diagram.dimension_at(n - 1, e.source);
                    off.push(acc.clone());
                }
                level_in.push(arranged);
                level_off.push(off);
            }
            incoming.push(level_in);
            offsets.push(level_off);
        }
        Ok(Self {
            diagram,
            ordering,
            incoming,
            offsets,
        })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn ordering(&self) -> &OrderingSpec {
        &self.ordering
    }

    /// Incoming edges of the vertex at `(level, idx)` in label order.
    pub fn incoming_at(&self, level: u32, idx: usize) -> &[InEdge] {
        &self.incoming[level as usize][idx]
    }

    pub fn incoming(&self, w: &Vertex) -> Result<&[InEdge]> {
        let idx = self.diagram.locate(w)?;
        Ok(self.incoming_at(w.level, idx))
    }

    /// Incoming edges of `w` as edge references, in label order.
    pub fn labeled_edges(&self, w: &Vertex) -> Result<Vec<EdgeRef>> {
        Ok(self
            .incoming(w)?
            .iter()
            .map(|e| EdgeRef {
                source: self.diagram.vertex_at(w.level - 1, e.source).clone(),
                target: w.clone(),
                copy: e.copy,
            })
            .collect())
    }

    /// Label of the `copy`-th edge from `u` into `w`.
    pub fn label_of(&self, edge: &EdgeRef) -> Option<u32> {
        let w = self.diagram.index_of(&edge.target)?;
        if edge.target.level == 0 {
            return None;
        }
        let u = self.diagram.index_of(&edge.source)?;
        self.incoming_at(edge.target.level, w)
            .iter()
            .position(|e| e.source == u && e.copy == edge.copy)
            .map(|p| p as u32 + 1)
    }

    fn extreme_labels(&self, level: u32, mut idx: usize, maximal: bool) -> Vec<u32> {
        let mut labels = vec![0; level as usize];
        for k in (0..level as usize).rev() {
            let edges = &self.incoming[k + 1][idx];
            let l = if maximal { edges.len() } else { 1 };
            labels[k] = l as u32;
            idx = edges[l - 1].source;
        }
        labels
    }

    pub fn minimal_path(&self, v: &Vertex) -> Result<FinitePath> {
        let idx = self.diagram.locate(v)?;
        Ok(FinitePath {
            terminal: v.clone(),
            labels: self.extreme_labels(v.level, idx, false),
        })
    }

    pub fn maximal_path(&self, v: &Vertex) -> Result<FinitePath> {
        let idx = self.diagram.locate(v)?;
        Ok(FinitePath {
            terminal: v.clone(),
            labels: self.extreme_labels(v.level, idx, true),
        })
    }

    /// Index of the vertex at each level `0..=n` along the path.
    pub fn vertex_indices(&self, x: &FinitePath) -> Result<Vec<usize>> {
        let n = x.terminal.level as usize;
        if x.labels.len() != n {
            return Err(Error::InvalidPath(format!(
                "{} labels for a path to level {n}",
                x.labels.len()
            )));
        }
        let mut idx = vec![0; n + 1];
        idx[n] = self.diagram.locate(&x.terminal)?;
        for k in (0..n).rev() {
            let edges = &self.incoming[k + 1][idx[k + 1]];
            let l = x.labels[k] as usize;
            if l == 0 || l > edges.len() {
                return Err(Error::InvalidPath(format!(
                    "label {l} at level {} exceeds indegree {}",
                    k + 1,
                    edges.len()
                )));
            }
            idx[k] = edges[l - 1].source;
        }
        Ok(idx)
    }

    pub fn vertices(&self, x: &FinitePath) -> Result<Vec<Vertex>> {
        Ok(self
            .vertex_indices(x)?
            .into_iter()
            .enumerate()
            .map(|(n, i)| self.diagram.vertex_at(n as u32, i).clone())
            .collect())
    }

    pub fn edges(&self, x: &FinitePath) -> Result<Vec<EdgeRef>> {
        let idx = self.vertex_indices(x)?;
        Ok((0..x.labels.len())
            .map(|k| {
                let e = self.incoming[k + 1][idx[k + 1]][x.labels[k] as usize - 1];
                EdgeRef {
                    source: self.diagram.vertex_at(k as u32, idx[k]).clone(),
                    target: self.diagram.vertex_at(k as u32 + 1, idx[k + 1]).clone(),
                    copy: e.copy,
                }
            })
            .collect())
    }

    /// Rebuilds a path from its edges, checking that they chain up from
    /// the root.
    pub fn path_from_edges(&self, edges: &[EdgeRef]) -> Result<FinitePath> {
        let arity = self.diagram.arity();
        let mut at = Vertex::root(arity);
        let mut labels = Vec::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            if e.source != at {
                return Err(Error::InvalidPath(format!(
                    "edge {k} starts at {} but the path is at {}",
                    e.source, at
                )));
            }
            let label = self.label_of(e).ok_or_else(|| {
                Error::InvalidPath(format!(
                    "no edge {} -> {} with copy {}",
                    e.source, e.target, e.copy
                ))
            })?;
            labels.push(label);
            at = e.target.clone();
        }
        Ok(FinitePath {
            terminal: at,
            labels,
        })
    }

    pub fn is_maximal(&self, x: &FinitePath) -> Result<bool> {
        let idx = self.vertex_indices(x)?;
        Ok((0..x.labels.len()).all(|k| x.labels[k] as usize == self.incoming[k + 1][idx[k + 1]].len()))
    }

    pub fn is_minimal(&self, x: &FinitePath) -> Result<bool> {
        self.vertex_indices(x)?;
        Ok(x.labels.iter().all(|&l| l == 1))
    }

    /// Next path into the same vertex: bump the lowest non-maximal edge and
    /// reset everything below it to the minimal path.
    pub fn successor(&self, x: &FinitePath) -> Result<FinitePath> {
        let idx = self.vertex_indices(x)?;
        let k = (0..x.labels.len())
            .find(|&k| (x.labels[k] as usize) < self.incoming[k + 1][idx[k + 1]].len())
            .ok_or(Error::MaximalAtHorizon)?;
        let mut labels = x.labels.clone();
        labels[k] += 1;
        labels[..k].iter_mut().for_each(|l| *l = 1);
        Ok(FinitePath {
            terminal: x.terminal.clone(),
            labels,
        })
    }

    pub fn predecessor(&self, x: &FinitePath) -> Result<FinitePath> {
        let idx = self.vertex_indices(x)?;
        let k = (0..x.labels.len())
            .find(|&k| x.labels[k] > 1)
            .ok_or(Error::MinimalAtHorizon)?;
        let mut labels = x.labels.clone();
        labels[k] -= 1;
        let source = self.incoming[k + 1][idx[k + 1]][labels[k] as usize - 1].source;
        let below = self.extreme_labels(k as u32, source, true);
        labels[..k].copy_from_slice(&below);
        Ok(FinitePath {
            terminal: x.terminal.clone(),
            labels,
        })
    }

    /// Position of `x` among the paths into its terminal vertex.
    pub fn rank(&self, x: &FinitePath) -> Result<BigUint> {
        let idx = self.vertex_indices(x)?;
        let mut r = BigUint::zero();
        for k in 0..x.labels.len() {
            r += &self.offsets[k + 1][idx[k + 1]][x.labels[k] as usize - 1];
        }
        Ok(r)
    }

    pub fn unrank(&self, v: &Vertex, rank: &BigUint) -> Result<FinitePath> {
        let mut idx = self.diagram.locate(v)?;
        let dim = self.diagram.dimension_at(v.level, idx);
        if rank >= dim {
            return Err(Error::RankOutOfRange {
                rank: rank.to_string(),
                dimension: dim.to_string(),
            });
        }
        let mut r = rank.clone();
        let mut labels = vec![0; v.level as usize];
        for k in (0..v.level as usize).rev() {
            let off = &self.offsets[k + 1][idx];
            // Offsets strictly increase; take the last one not above r.
            let l = off.partition_point(|o| o <= &r) - 1;
            r -= &off[l];
            labels[k] = l as u32 + 1;
            idx = self.incoming[k + 1][idx][l].source;
        }
        Ok(FinitePath {
            terminal: v.clone(),
            labels,
        })
    }

    /// Tower size as a `u64`, or `TowerTooLarge` above the budget.
    pub fn checked_dimension(&self, v: &Vertex, budget: u64) -> Result<u64> {
        let dim = self.diagram.dimension(v)?;
        dim.to_u64()
            .filter(|&d| d <= budget)
            .ok_or_else(|| Error::TowerTooLarge {
                vertex: v.coords.clone(),
                dimension: dim.to_string(),
                budget,
            })
    }

    /// Every path into `v` in order, by iterating the successor from the
    /// minimal path.
    pub fn tower(&self, v: &Vertex, budget: u64) -> Result<Tower> {
        let dim = self.checked_dimension(v, budget)?;
        let mut paths = Vec::with_capacity(dim as usize);
        let mut x = self.minimal_path(v)?;
        loop {
            let next = self.successor(&x);
            paths.push(x);
            match next {
                Ok(n) => x = n,
                Err(Error::MaximalAtHorizon) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(Tower {
            vertex: v.clone(),
            paths,
        })
    }

    pub fn k_coding_symbol(&self, x: &FinitePath, k: usize) -> Result<CodingSymbol> {
        if k > x.labels.len() {
            return Err(Error::InvalidPath(format!(
                "cannot take {k} edges of a path of length {}",
                x.labels.len()
            )));
        }
        let idx = self.vertex_indices(x)?;
        Ok(CodingSymbol {
            vertex: self.diagram.vertex_at(k as u32, idx[k]).clone(),
            labels: x.labels[..k].to_vec(),
        })
    }

    /// `C_j(w)`: level-`j` start of every segment from level `j` up to
    /// `w`, segments ordered by their deepest differing edge.
    pub fn vertex_coding(&self, w: &Vertex, j: u32, budget: u64) -> Result<Vec<Vertex>> {
        let idx = self.diagram.locate(w)?;
        if j >= w.level {
            return Err(Error::PreconditionNotMet(format!(
                "coding level {j} must be below the vertex level {}",
                w.level
            )));
        }
        let mut out = Vec::new();
        self.coding_into(w.level, idx, j, budget, &mut out)?;
        Ok(out
            .into_iter()
            .map(|i| self.diagram.vertex_at(j, i).clone())
            .collect())
    }

    fn coding_into(&self, level: u32, idx: usize, j: u32, budget: u64, out: &mut Vec<usize>) -> Result<()> {
        if level == j {
            if out.len() as u64 >= budget {
                return Err(Error::TowerTooLarge {
                    vertex: self.diagram.vertex_at(level, idx).coords.clone(),
                    dimension: format!("more than {budget}"),
                    budget,
                });
            }
            out.push(idx);
            return Ok(());
        }
        for e in &self.incoming[level as usize][idx] {
            self.coding_into(level - 1, e.source, j, budget, out)?;
        }
        Ok(())
    }

    /// The `k`-symbols of the tower of `v`, in tower order.
    pub fn basic_block(&self, v: &Vertex, k: usize, budget: u64) -> Result<Vec<CodingSymbol>> {
        if k > v.level as usize {
            return Err(Error::PreconditionNotMet(format!(
                "block depth {k} exceeds the vertex level {}",
                v.level
            )));
        }
        self.tower(v, budget)?
            .paths
            .iter()
            .map(|x| self.k_coding_symbol(x, k))
            .collect()
    }
}
