//! Finite-horizon search for depth-`i` pairs.
//!
//! Two level-`L` paths with the same first `i` edges are run forward with
//! the successor and backward with the predecessor, in lockstep, inside
//! their towers. A pair is killed as soon as the first-`i`-edge symbols
//! disagree. A pair that is never killed before both directions run out of
//! tower is censored: the finite horizon cannot tell what happens next.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::EdgeRef;
use crate::error::{Error, Result};
use crate::measure::dense_orbit_trace;
use crate::vershik::{FinitePath, OrderedDiagram};

/// Default cap on the number of paths in a single tower.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Most candidate pairs a single probe will simulate.
pub const MAX_PAIRS: u64 = 500_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeConfig {
    pub i: usize,
    pub horizon: u32,
    pub floor: u32,
    pub budget: u64,
    /// Genuine conflicts listed in full; the rest are only counted.
    pub list_limit: usize,
}

impl ProbeConfig {
    pub fn new(i: usize, horizon: u32) -> Self {
        Self {
            i,
            horizon,
            floor: 0,
            budget: DEFAULT_BUDGET,
            list_limit: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KillReason {
    CodingMismatch,
    BoundaryCensored,
}

/// What happened in one direction of the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Direction {
    /// Steps taken with matching symbols.
    pub survived: usize,
    /// `CodingMismatch` at step `survived + 1`, or censored there.
    pub outcome: KillReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeCandidate {
    pub x: Vec<EdgeRef>,
    pub x_prime: Vec<EdgeRef>,
    pub ranks: (u64, u64),
    pub divergence_level: usize,
    pub forward: Direction,
    pub backward: Direction,
    pub reason: KillReason,
    /// Steps (negative is backward) where the `(i + 1)`-symbols differ.
    pub witness_steps: Vec<i64>,
    pub min_coord_trace: (Vec<u32>, Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub i: usize,
    #[serde(rename = "L")]
    pub horizon: u32,
    pub floor: u32,
    pub candidates: u64,
    pub coding_killed: u64,
    pub censored: u64,
    pub genuine_conflicts: Vec<ProbeCandidate>,
    pub genuine_conflict_count: u64,
    pub uncensored_genuine_conflicts: u64,
    pub unfiltered_candidates: u64,
    pub max_killed_window: usize,
    pub max_censored_window: usize,
}

struct TowerData {
    dim: usize,
    /// Per path: id of the first-`i`-edge symbol and of the first `i + 1`.
    sym_i: Vec<u32>,
    sym_next: Vec<u32>,
    paths: Vec<FinitePath>,
    indices: Vec<Vec<usize>>,
}

struct SymbolTable(HashMap<(usize, Vec<u32>), u32>);

impl SymbolTable {
    fn id(&mut self, vertex: usize, labels: &[u32]) -> u32 {
        let next = self.0.len() as u32;
        *self.0.entry((vertex, labels.to_vec())).or_insert(next)
    }
}

fn build_towers(od: &OrderedDiagram, level: u32, keep: &[usize], i: usize, budget: u64) -> Result<Vec<TowerData>> {
    let mut table_i = SymbolTable(HashMap::new());
    let mut table_next = SymbolTable(HashMap::new());
    let mut out = Vec::with_capacity(keep.len());
    for &t in keep {
        let v = od.diagram().vertex_at(level, t);
        let tower = od.tower(v, budget)?;
        let mut data = TowerData {
            dim: tower.paths.len(),
            sym_i: Vec::with_capacity(tower.paths.len()),
            sym_next: Vec::with_capacity(tower.paths.len()),
            paths: Vec::with_capacity(tower.paths.len()),
            indices: Vec::with_capacity(tower.paths.len()),
        };
        for x in tower.paths {
            let idx = od.vertex_indices(&x)?;
            data.sym_i.push(table_i.id(idx[i], &x.labels[..i]));
            data.sym_next.push(table_next.id(idx[i + 1], &x.labels[..i + 1]));
            data.paths.push(x);
            data.indices.push(idx);
        }
        out.push(data);
    }
    Ok(out)
}

struct PairOutcome {
    forward: Direction,
    backward: Direction,
    witness_steps: Vec<i64>,
}

fn simulate(a: &TowerData, ra: usize, b: &TowerData, rb: usize) -> PairOutcome {
    let mut witness_steps = Vec::new();
    if a.sym_next[ra] != b.sym_next[rb] {
        witness_steps.push(0);
    }
    let mut run = |sign: i64| {
        let mut m = 0usize;
        loop {
            let next = m + 1;
            let (pa, pb) = if sign > 0 {
                (ra + next, rb + next)
            } else {
                match (ra.checked_sub(next), rb.checked_sub(next)) {
                    (Some(x), Some(y)) => (x, y),
                    _ => {
                        return Direction {
                            survived: m,
                            outcome: KillReason::BoundaryCensored,
                        }
                    }
                }
            };
            if pa >= a.dim || pb >= b.dim {
                return Direction {
                    survived: m,
                    outcome: KillReason::BoundaryCensored,
                };
            }
            if a.sym_i[pa] != b.sym_i[pb] {
                return Direction {
                    survived: m,
                    outcome: KillReason::CodingMismatch,
                };
            }
            if a.sym_next[pa] != b.sym_next[pb] {
                witness_steps.push(sign * next as i64);
            }
            m = next;
        }
    };
    let forward = run(1);
    let backward = run(-1);
    witness_steps.sort_unstable();
    PairOutcome {
        forward,
        backward,
        witness_steps,
    }
}

fn pair_count(groups: &HashMap<u32, Vec<(usize, usize)>>) -> u64 {
    groups
        .values()
        .map(|g| {
            let n = g.len() as u64;
            n * n.saturating_sub(1) / 2
        })
        .sum()
}

fn group_by_symbol(towers: &[TowerData]) -> HashMap<u32, Vec<(usize, usize)>> {
    let mut groups: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (t, data) in towers.iter().enumerate() {
        for (r, &s) in data.sym_i.iter().enumerate() {
            groups.entry(s).or_default().push((t, r));
        }
    }
    groups
}

/// Runs every candidate pair at the horizon and tallies the outcomes.
pub fn probe_depth_pairs(od: &OrderedDiagram, cfg: &ProbeConfig) -> Result<ProbeReport> {
    let level = cfg.horizon;
    if level > od.diagram().max_level() {
        return Err(Error::BeyondHorizon {
            level,
            max_level: od.diagram().max_level(),
        });
    }
    let mut report = ProbeReport {
        i: cfg.i,
        horizon: level,
        floor: cfg.floor,
        candidates: 0,
        coding_killed: 0,
        censored: 0,
        genuine_conflicts: Vec::new(),
        genuine_conflict_count: 0,
        uncensored_genuine_conflicts: 0,
        unfiltered_candidates: 0,
        max_killed_window: 0,
        max_censored_window: 0,
    };
    // Pairs must differ at or beyond edge i, which needs i < L.
    if cfg.i >= level as usize {
        return Ok(report);
    }
    let vertices = od.diagram().level(level);
    let keep: Vec<usize> = (0..vertices.len())
        .filter(|&t| vertices[t].min_coord() >= cfg.floor)
        .collect();
    let towers = build_towers(od, level, &keep, cfg.i, cfg.budget)?;
    let groups = group_by_symbol(&towers);
    report.candidates = pair_count(&groups);
    report.unfiltered_candidates = if keep.len() == vertices.len() {
        report.candidates
    } else {
        let all: Vec<usize> = (0..vertices.len()).collect();
        pair_count(&group_by_symbol(&build_towers(od, level, &all, cfg.i, cfg.budget)?))
    };
    if report.candidates > MAX_PAIRS {
        return Err(Error::LimitExceeded {
            what: "candidate pairs",
            limit: MAX_PAIRS,
        });
    }

    // Work units are the first member of each pair, in canonical order.
    let mut members: Vec<(usize, usize)> = towers
        .iter()
        .enumerate()
        .flat_map(|(t, d)| (0..d.dim).map(move |r| (t, r)))
        .collect();
    members.sort_unstable();
    let position: HashMap<(usize, usize), usize> = members.iter().enumerate().map(|(p, &m)| (m, p)).collect();

    struct Tally {
        killed: u64,
        censored: u64,
        max_killed: usize,
        max_censored: usize,
        genuine: Vec<(usize, usize, usize, usize, PairOutcome)>,
    }

    let tallies: Vec<Tally> = members
        .par_iter()
        .map(|&(ta, ra)| {
            let mut tally = Tally {
                killed: 0,
                censored: 0,
                max_killed: 0,
                max_censored: 0,
                genuine: Vec::new(),
            };
            let me = position[&(ta, ra)];
            let group = &groups[&towers[ta].sym_i[ra]];
            for &(tb, rb) in group {
                if position[&(tb, rb)] <= me {
                    continue;
                }
                let out = simulate(&towers[ta], ra, &towers[tb], rb);
                let window = out.forward.survived + out.backward.survived + 1;
                let killed = out.forward.outcome == KillReason::CodingMismatch
                    || out.backward.outcome == KillReason::CodingMismatch;
                if killed {
                    tally.killed += 1;
                    tally.max_killed = tally.max_killed.max(window);
                } else {
                    tally.censored += 1;
                    tally.max_censored = tally.max_censored.max(window);
                    if !out.witness_steps.is_empty() {
                        tally.genuine.push((ta, ra, tb, rb, out));
                    }
                }
            }
            tally
        })
        .collect();

    for tally in tallies {
        report.coding_killed += tally.killed;
        report.censored += tally.censored;
        report.max_killed_window = report.max_killed_window.max(tally.max_killed);
        report.max_censored_window = report.max_censored_window.max(tally.max_censored);
        for (ta, ra, tb, rb, out) in tally.genuine {
            report.genuine_conflict_count += 1;
            let censored_both = out.forward.outcome == KillReason::BoundaryCensored
                && out.backward.outcome == KillReason::BoundaryCensored;
            if !censored_both {
                report.uncensored_genuine_conflicts += 1;
            }
            if report.genuine_conflicts.len() < cfg.list_limit {
                report
                    .genuine_conflicts
                    .push(describe(od, &towers[ta], ra, &towers[tb], rb, out)?);
            }
        }
    }
    Ok(report)
}

fn describe(od: &OrderedDiagram, a: &TowerData, ra: usize, b: &TowerData, rb: usize, out: PairOutcome) -> Result<ProbeCandidate> {
    let (x, y) = (&a.paths[ra], &b.paths[rb]);
    let (ix, iy) = (&a.indices[ra], &b.indices[rb]);
    let divergence_level = (0..x.len())
        .find(|&k| ix[k + 1] != iy[k + 1] || x.labels[k] != y.labels[k])
        .unwrap_or(x.len());
    let x_edges = od.edges(x)?;
    let y_edges = od.edges(y)?;
    Ok(ProbeCandidate {
        min_coord_trace: (dense_orbit_trace(&x_edges), dense_orbit_trace(&y_edges)),
        x: x_edges,
        x_prime: y_edges,
        ranks: (ra as u64, rb as u64),
        divergence_level,
        forward: out.forward,
        backward: out.backward,
        reason: KillReason::BoundaryCensored,
        witness_steps: out.witness_steps,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    #[serde(rename = "L")]
    pub horizon: u32,
    pub candidates: u64,
    pub coding_killed: u64,
    pub censored: u64,
    pub max_killed_window: usize,
    pub max_censored_window: usize,
    pub uncensored_genuine_conflicts: u64,
}

/// One probe per horizon in `horizons`.
pub fn survival_profile(
    od: &OrderedDiagram,
    i: usize,
    horizons: &[u32],
    floor: u32,
    budget: u64,
) -> Result<Vec<ProfileRow>> {
    horizons
        .iter()
        .map(|&horizon| {
            let cfg = ProbeConfig {
                i,
                horizon,
                floor,
                budget,
                list_limit: 0,
            };
            let r = probe_depth_pairs(od, &cfg)?;
            Ok(ProfileRow {
                horizon,
                candidates: r.candidates,
                coding_killed: r.coding_killed,
                censored: r.censored,
                max_killed_window: r.max_killed_window,
                max_censored_window: r.max_censored_window,
                uncensored_genuine_conflicts: r.uncensored_genuine_conflicts,
            })
        })
        .collect()
}
